#pragma once

/// \file reference_tables.hpp
/// \brief Published mesh-condition and convergence tables used as golden data.

#include <array>

namespace crfem::reference {

inline constexpr std::array<int, 6> kN{4, 8, 16, 32, 64, 128};

struct MeshRow {
  int N;
  int dofs;
  double min_angle;
  double max_angle;
  double dis_sov;
};

/// Mesh I, eps = 2.
inline constexpr std::array<MeshRow, 6> kMeshIEps2{{
    {4, 144, 8.50, 2.00, 1.04199},
    {8, 544, 1.63e+01, 2.00, 7.63521e-01},
    {16, 2112, 3.21e+01, 2.00, 5.95764e-01},
    {32, 8320, 6.41e+01, 2.00, 5.00244e-01},
    {64, 33024, 1.28e+02, 2.00, 4.20500e-01},
    {128, 131584, 2.56e+02, 2.00, 3.53564e-01},
}};

/// Mesh I, eps = 4.
inline constexpr std::array<MeshRow, 6> kMeshIEps4{{
    {4, 144, 1.28031e+02, 2.00, 1.68200},
    {8, 544, 1.02400e+03, 2.00, 2.00000},
    {16, 2112, 8.19200e+03, 2.00, 2.37841},
    {32, 8320, 6.55360e+04, 2.00, 2.82843},
    {64, 33024, 5.24288e+05, 2.00, 3.36359},
    {128, 131584, 4.19430e+06, 2.00, 4.00000},
}};

/// Mesh II (cosine grading).
inline constexpr std::array<MeshRow, 6> kMeshII{{
    {4, 144, 5.65685, 2.00, 1.00000},
    {8, 544, 1.04525e+01, 2.00, 7.94187e-01},
    {16, 2112, 2.05033e+01, 2.00, 6.66204e-01},
    {32, 8320, 4.08092e+01, 2.00, 5.59870e-01},
    {64, 33024, 8.15201e+01, 2.00, 4.70722e-01},
    {128, 131584, 1.62991e+02, 2.00, 3.95813e-01},
}};

/// One row of a convergence table. Rates are absent (negative) on the first
/// row and in columns printed as "-".
struct ErrorRow {
  int N;
  double err_vh;
  double rate_vh;
  double err_l2;
  double rate_l2;
  double err_qh;
  double rate_qh;
};

/// Example 1 on Mesh I, eps = 1.
inline constexpr std::array<ErrorRow, 6> kExample1Eps1{{
    {4, 9.30891e-01, -1, 5.57356e-01, -1, 2.77363e-01, -1},
    {8, 5.06405e-01, 0.88, 1.63541e-01, 1.77, 1.39270e-01, 0.99},
    {16, 2.59214e-01, 0.97, 4.33267e-02, 1.92, 6.97005e-02, 1.00},
    {32, 1.30439e-01, 0.99, 1.10344e-02, 1.97, 3.48582e-02, 1.00},
    {64, 6.53276e-02, 1.00, 2.77257e-03, 1.99, 1.74301e-02, 1.00},
    {128, 3.26775e-02, 1.00, 6.93973e-04, 2.00, 8.71516e-03, 1.00},
}};

/// Example 1 on Mesh I, eps = 2.
inline constexpr std::array<ErrorRow, 6> kExample1Eps2{{
    {4, 1.04386, -1, 7.54616e-01, -1, 2.28331e-01, -1},
    {8, 6.00986e-01, 0.80, 2.50020e-01, 1.59, 1.13984e-01, 1.00},
    {16, 3.14178e-01, 0.94, 7.08474e-02, 1.82, 5.69444e-02, 1.00},
    {32, 1.59284e-01, 0.98, 1.85985e-02, 1.93, 2.84658e-02, 1.00},
    {64, 7.99483e-02, 0.99, 4.71970e-03, 1.98, 1.42321e-02, 1.00},
    {128, 4.00138e-02, 1.00, 1.18479e-03, 1.99, 7.11597e-03, 1.00},
}};

/// Example 1 on Mesh I, eps = 4.
inline constexpr std::array<ErrorRow, 6> kExample1Eps4{{
    {4, 1.13521, -1, 9.15578e-01, -1, 3.45283e-01, -1},
    {8, 8.34160e-01, 0.44, 5.29158e-01, 0.79, 1.65246e-01, 1.06},
    {16, 4.72051e-01, 0.82, 1.80204e-01, 1.55, 8.17474e-02, 1.02},
    {32, 2.47274e-01, 0.93, 5.25128e-02, 1.78, 4.07539e-02, 1.00},
    {64, 1.25537e-01, 0.98, 1.39353e-02, 1.91, 2.03619e-02, 1.00},
    {128, 6.30344e-02, 0.99, 3.54646e-03, 1.97, 1.01790e-02, 1.00},
}};

/// Example 2 on Mesh I, eps = 1 (velocity rates not printed).
inline constexpr std::array<ErrorRow, 6> kExample2MeshI{{
    {4, 9.09364e-07, -1, 5.47195e-07, -1, 2.77362e-01, -1},
    {8, 2.66354e-06, -1, 1.24705e-06, -1, 1.39270e-01, 0.99},
    {16, 1.97022e-06, -1, 1.24596e-06, -1, 6.97007e-02, 1.00},
    {32, 1.73889e-06, -1, 9.04173e-07, -1, 3.48583e-02, 1.00},
    {64, 1.26862e-06, -1, 5.57509e-07, -1, 1.74301e-02, 1.00},
    {128, 1.43621e-06, -1, 8.86565e-07, -1, 8.71518e-03, 1.00},
}};

/// Example 2 on Mesh II.
inline constexpr std::array<ErrorRow, 6> kExample2MeshII{{
    {4, 2.98226e-06, -1, 1.08150e-06, -1, 2.87956e-01, -1},
    {8, 2.81107e-06, -1, 1.70024e-06, -1, 1.49758e-01, 0.94},
    {16, 4.52069e-06, -1, 2.75827e-06, -1, 7.54093e-02, 0.99},
    {32, 2.36901e-06, -1, 9.65821e-07, -1, 3.77670e-02, 1.00},
    {64, 2.73752e-06, -1, 1.11624e-06, -1, 1.88912e-02, 1.00},
    {128, 2.08281e-06, -1, 8.56957e-07, -1, 9.44656e-03, 1.00},
}};

}  // namespace crfem::reference
