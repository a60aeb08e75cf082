#pragma once

// Generated by tests/oracles/freeze_values.py; do not edit.

namespace frozen {

struct Hyp { double a, b, c, x, value; };
inline constexpr Hyp kHyp2f1[] = {
    {-0.54054054054054054054, 4, 0.45945945945945945946, -0.3, 2.1648640788885216341},
    {-0.54054054054054054054, 4, 0.45945945945945945946, -0.49, 2.7380588664526010004},
    {-0.54054054054054054054, 4, 0.45945945945945945946, -0.9, 3.7500718622373497962},
    {-0.54054054054054054054, 4, 0.45945945945945945946, -7.5, 11.749913129550015089},
    {-0.54054054054054054054, 4, 0.45945945945945945946, -1000000.0, 6922.6263168517429207},
    {-0.54054054054054054054, 1, 0.45945945945945945946, -2.5, 2.9231738686158527655},
    {-0.54054054054054054054, 1, 0.45945945945945945946, -0.01, 1.0117278870750587162},
    {-0.54054054054054054054, 1, 0.45945945945945945946, -1000.0, 71.636409599144981042},
    {-0.5, 2, 0.5, -30.0, 12.905620758757046672},
    {0.3, 1.7, 2.2, -4.0, 0.6647845216463378137},
    {1.5, 1.5, 2.5, -3.0, 0.26034599630094634753},
    {-0.4000000000000000222, 8, 0.5999999999999999778, -250.0, 30.67787898527980379},
};

// Interference kernel by direct integration: alpha, antennas, x, value.
struct Z1 { double alpha; int m; double x, value; };
inline constexpr Z1 kZ1Integral[] = {
    {3.7, 1, 0.5, 0.51604749438066959147},
    {3.7, 4, 2.0, 4.7529888399084175532},
    {3.0, 2, 0.05, 0.1963868825599444864},
    {4.0, 1, 10.0, 3.9987600505576613678},
    {2.5, 4, 0.8, 10.443483037416527553},
};

// Per-tier coverage at the reference network: rate target, policy, macro, helper.
struct Coverage { double rate; const char* policy; double macro, helper; };
inline constexpr Coverage kCoverage[] = {
    {1000000, "popular", 0.19873995795331306786, 0.24893965290500520196},
    {1000000, "uniform", 0.21369946611807069331, 0.23991535018843813397},
    {2000000, "popular", 0.12783474670525548676, 0.2348696801488738253},
    {2000000, "uniform", 0.14409109795910782445, 0.18565095273725369734},
    {6000000, "popular", 0.043947340673199131873, 0.19590342071226214298},
    {6000000, "uniform", 0.055790697602138538391, 0.10826848042537930007},
};

// ASE in nat/s/Hz/m^2 with equal biases.
inline constexpr double kAsePopular = 0.00010388811673643067991;
inline constexpr double kAseUniform = 0.00005845834189697086901;
inline constexpr double kAseClosedPopular = 0.00011279503788415132981;
inline constexpr double kAseTraditional10M = 0.000055887832277981739503;
inline constexpr double kAseEverything = 0.00021546274016681569525;
inline constexpr double kAsePopularBiased = 0.00010038292700697154434;

}  // namespace frozen
