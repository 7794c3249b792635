#pragma once

// Frozen reference values for the test suites, computed independently of the
// library with 50-digit arithmetic (series summation and adaptive quadrature
// of the defining integrals) and rounded to double.

namespace oracle {

// sum_{n>=1} rho^n/(n n!)
inline constexpr double kSeriesQuarter = 0.26653543155644403;
inline constexpr double kSeriesHalf = 0.57015142052158603;
inline constexpr double kSeriesOne = 1.3179021514544039;

// Exact exponential-service busy-period variance, lambda = 1.
inline constexpr double kMmVarQuarter = 0.090448696958509844;
inline constexpr double kMmVarHalf = 0.51918148747504350;
inline constexpr double kMmVarOne = 4.2123664979586134;
inline constexpr double kMmVarTwo = 68.061295175259055;
inline constexpr double kMmVarFive = 34664.315520261796;
// lambda = 0.01, rho = 0.01.
inline constexpr double kMmVarSmall = 1.0151032446628674;

// Exact constant-service busy-period variance, lambda = 1.
inline constexpr double kMdVarHalf = 0.069560557758917089;
inline constexpr double kMdVarOne = 0.95249244201255976;
inline constexpr double kMdVarTwo = 24.041925637421638;

// Direct-quadrature busy-period variances, lambda = 1, mean = rho.
inline constexpr double kErlang2VarHalf = 0.29187136561959496;
inline constexpr double kErlang2VarOne = 2.5437176171666716;
inline constexpr double kErlang2VarTwo = 44.859637109538299;
inline constexpr double kUniformVarHalf = 0.22202240109592399;  // uniform(0,1)
inline constexpr double kUniformVarOne = 2.0779788932048131;    // uniform(0,2)
inline constexpr double kUniformVarTwo = 39.836173031453056;    // uniform(0,4)
inline constexpr double kH2VarHalf = 0.74273726875190889;  // p=.5|.5 means .25|.75
inline constexpr double kH2VarOne = 5.8228117505516100;    // means .5|1.5
inline constexpr double kH2VarTwo = 89.468588816060226;    // means 1|3
inline constexpr double kWeibullVarOne = 2.4374098750192344;  // shape 1.5, mean 1
inline constexpr double kGammaVarOne = 2.2145093246200235;    // shape 2.5, mean 1
inline constexpr double kLomaxVar = 0.61869456969183064;      // shape 3.5, scale 1

inline constexpr double kWeibull15MeanOneScale = 1.1077321674324725;

// Normalized tail-power coefficients.
inline constexpr double kErlang2B1 = 1.625;
inline constexpr double kErlang2B2 = 1.5061728395061728;
inline constexpr double kErlang2B5 = 1.3986571930727023;
inline constexpr double kH2B2 = 1.1847619047619048;

// Bound table at lambda = 1, unit squared CV, M = 14: formula values.
inline constexpr double kTableRho[6] = {0.5, 1, 10, 20, 50, 100};
inline constexpr double kLower13[6] = {0.48174087543394913, 3.6707742704716050,
                                       486927311.67337482, 2.3538544149649033e+17,
                                       2.6881171418161354e+43, 7.2259737681257493e+86};
inline constexpr double kUpper13[6] = {0.55996040257662312, 4.8574773260376793,
                                       1454570473.6659890, 7.0615576072751393e+17,
                                       8.0643514254484063e+43, 2.1677921304377248e+87};
inline constexpr double kUpper17Printed[6] = {0.50046118145449631, 3.9415703842151099,
                                              549431085.32712461, 2.5261040665860388e+17,
                                              2.8801255091284692e+43, 7.7421147515633028e+86};
inline constexpr double kUpper17Corrected[6] = {0.51918148747504350, 4.2123664979586148,
                                                611934858.98087440, 2.6983537182071743e+17,
                                                3.0721338764408029e+43, 8.2582557350008563e+86};

// The historically published table digits (second and third entries of the
// improved column are inconsistent with the printed formula; see the
// acceptance suite).
inline constexpr double kPrintedUpper13[6] = {0.55954328, 4.8574775, 1.4545705e9,
                                              7.061558e17, 8.0643512e43, 2.167792e87};
inline constexpr double kPrintedUpper17[6] = {0.50046123, 3.9415704, 5.6362048e8,
                                              2.5325047e17, 2.8801252e43, 7.7421139e86};
inline constexpr double kPrintedLower13[6] = {0.48174095, 3.6707743, 4.8692729e8,
                                              2.3538545e17, 2.6881171e43, 7.2259735e86};

// Class lower bounds.
inline constexpr double kDfrLowerG15 = 2.2722771022189274;  // lambda=1, rho=1, g2=1.5
inline constexpr double kImrlLowerH2 = 4.7254560149230078;  // alpha=1, mu2=2.5, mu3=10.5

// Coefficient of variation.
inline constexpr double kBetaDetOne = 0.71828182845904524;  // e - 2
inline constexpr double kGammaB2ExpOne = 1.4267154211874166;
inline constexpr double kGammaB2DetOne = 0.32260622532306821;
inline constexpr double kGammaB2H2One = 1.9721682154696740;
inline constexpr double kBetaH2One = 1.6141270012349608;
inline constexpr double kDetGapRho5 = 0.054729418989312103;
inline constexpr double kDetGapRho10 = 8.1727706499013271e-4;
inline constexpr double kDetGapRho15 = 8.5652704014749630e-6;
inline constexpr double kDetGapRho20 = 7.8323837984036830e-8;
inline constexpr double kBetaExpTinyMean = 1.0002500555659739e-6;  // exp mean 1e-3

inline constexpr double kMeanBusyHalf = 0.64872127070012815;
inline constexpr double kMeanBusyOne = 1.7182818284590452;

}  // namespace oracle
