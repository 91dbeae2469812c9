// Bilinear pseudo-products Q_m with multipliers that factor into products of
// single-variable elementary symbols in xi, xi-eta, eta, and the explicit
// multiplier set of the axisymmetric rotating-Euler system in both the (a,c)
// and the (U+,U-) form.
//
// Conventions:
//   q_m(f,g) coefficients:  Q-hat(xi) = sum_eta m(xi,eta) f-hat(xi-eta) g-hat(eta),
//   so m == 1 gives the transform of the pointwise product.
//   Riesz factors are carried as operators with symbol i*xi_j/|xi_h| and the
//   skew operator as i*Lambda; every i lives in the term coefficient, so the
//   listed symbol factors are real and term-by-term reality bookkeeping is
//   just the parity of the coefficient's power of i.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rotwave/bands.hpp"
#include "rotwave/formulation.hpp"
#include "rotwave/grid.hpp"

namespace rotwave {

enum class Sym : uint8_t {
  One = 0,
  RieszFull1,  // xi_1/|xi|
  RieszFull2,
  RieszFull3,
  RieszH1,     // xi_1/|xi_h|
  RieszH2,
  SqrtOneMinusLambda2,  // |xi_h|/|xi|
  Lambda,               // xi_3/|xi|
  AbsXi,                // |xi|
};

double sym_value(Sym s, const std::array<double, 3>& xi);

struct PipelineTerm {
  cplx coeff;
  std::vector<Sym> out;  // factors evaluated at xi
  std::vector<Sym> f;    // factors evaluated at xi - eta
  std::vector<Sym> g;    // factors evaluated at eta
};

struct SymbolPipeline {
  std::vector<PipelineTerm> terms;

  SymbolPipeline& operator+=(const SymbolPipeline& o);
  SymbolPipeline& operator-=(const SymbolPipeline& o);
  SymbolPipeline& operator*=(cplx a);
  // Sorts factor lists and merges identical terms.
  void normalize();
};

SymbolPipeline operator+(SymbolPipeline a, const SymbolPipeline& b);
SymbolPipeline operator-(SymbolPipeline a, const SymbolPipeline& b);
SymbolPipeline operator*(cplx a, SymbolPipeline p);

// Pointwise value m(xi, eta); axis/zero symbol conventions apply.
cplx eval_pipeline(const SymbolPipeline& m, const std::array<double, 3>& xi,
                   const std::array<double, 3>& eta);

// Human-readable term list for audit.
std::string describe(const SymbolPipeline& m);

// ---- the rotating-Euler multiplier set -------------------------------------

// Q_{m^1..m^4} building blocks of the (a,c) system.
struct BaseMultipliers {
  SymbolPipeline m1, m2, m3, m4;
};
BaseMultipliers build_base_multipliers();

// m_1^{++}, m_1^{+-}, m_2^{++}, m_2^{+-} of the dispersive system.
struct SignedMultipliers {
  SymbolPipeline m1pp, m1pm, m2pp, m2pm;
};

// Derived route: expand the (a,c) system under a = (U+ + U-)/2,
// c = (U+ - U-)/2 and fold reversed-order channels by swapping input slots.
// This is exact pipeline algebra on m^1..m^4 and is what the solver uses.
SignedMultipliers build_signed_multipliers();

// Literal transcription of the published closed forms. Kept for audit; the
// test suite compares it against the derived route (they differ in the
// m2pm cross kernel, see tests).
SignedMultipliers build_signed_multipliers_printed();

struct BilinearKernel {
  std::string name;     // plus_pp, plus_pm, plus_mm, minus_pp, minus_pm, minus_mm
  SymbolPipeline pipeline;
  int mu = +1;  // sign of the first input profile
  int nu = +1;  // sign of the second input profile
};

// The six 1/4-weighted signed combinations feeding dU+/dt and dU-/dt.
std::vector<BilinearKernel> build_euler_kernels();

// ---- evaluation -------------------------------------------------------------

// Evaluates pseudo-products on the grid via factored transforms, sharing
// input transforms and output-group FFTs across terms and kernels.
class QmEvaluator {
 public:
  explicit QmEvaluator(const Grid& g, bool dealias_products = true);

  // Registers an input spectral field; returns its handle. The field is
  // dealiased on registration when dealiasing is enabled.
  int register_field(const SpectralField& F);

  SpectralField evaluate(const SymbolPipeline& m, int f_id, int g_id);

  struct Channel {
    const SymbolPipeline* m;
    int f_id;
    int g_id;
  };
  // Sum of several pseudo-products sharing input transforms and per-output-
  // group FFTs (one forward transform per distinct output symbol list).
  SpectralField evaluate_sum(const std::vector<Channel>& channels);

 private:
  const std::vector<cplx>& input_physical(int id, const std::vector<Sym>& syms);

  Grid grid_;
  bool dealias_;
  std::vector<SpectralField> fields_;
  std::map<uint64_t, std::vector<cplx>> cache_;  // symbol-combo key -> physical rep
};

// One-shot convenience wrapper.
SpectralField q_m(const SymbolPipeline& m, const SpectralField& f,
                  const SpectralField& g, bool dealias_products = true);

// ---- right-hand sides --------------------------------------------------------

// d/dt (a, c) of the axisymmetric system:
//   da/dt = Lam c + Q_{m1-m2}[a, Lam c] + Lam Q_{m3}[a, c]
//   dc/dt = Lam a - Lam Q_{m1}[Lam c, Lam c] - Lam Q_{m2}[a, a]
//           - (1-2Lambda^2) Q_{m3}[Lam c, c] - Lam Q_{m4}[c, c]
// include_linear = false drops the +-Lam terms (integrating-factor stepping).
ScalarPair rhs_ac(const ScalarPair& s, bool dealias_products = true,
                  bool include_linear = true);

// d/dt (U+, U-): linear part +-Lam U+- plus the six 1/4-weighted kernels.
DispersivePair rhs_dispersive(const DispersivePair& d, bool dealias_products = true);

// ---- set-size gain check -----------------------------------------------------

struct SetSizeTrial {
  BandIndex out, fband, gband;
  double ratio = 0.0;      // || P_out Q_m(f,g) || / (|S| ||m||_inf ||f|| ||g||)
  double m_inf = 0.0;      // sampled sup of |m| over the band triple
};

// Continuum-normalized empirical constant of the set-size lemma; norms carry
// the lattice measure (2pi/L)^{3/2} and Q the (2pi)^{-3/2} (2pi/L)^3 factor.
SetSizeTrial set_size_check(const SymbolPipeline& m, const Grid& g,
                            const BandIndex& out, const BandIndex& fband,
                            const BandIndex& gband, uint64_t seed);

}  // namespace rotwave
