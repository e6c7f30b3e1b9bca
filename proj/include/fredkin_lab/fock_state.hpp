#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fredkin_lab {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

char to_char(Polarization p);

/// One polarization-resolved optical mode: a spatial rail plus H or V.
struct ModeId {
  std::string spatial;
  Polarization pol = Polarization::H;

  auto operator<=>(const ModeId&) const = default;
};

/// Ordered, duplicate-free set of modes. Every state and unitary is indexed
/// against one of these; order is registration order with H before V.
class ModeRegister {
 public:
  ModeRegister() = default;
  explicit ModeRegister(std::vector<ModeId> modes);

  /// Registers both polarizations of each port, in the given order.
  static ModeRegister from_ports(std::span<const std::string> ports);
  static ModeRegister from_ports(std::initializer_list<std::string> ports);

  std::size_t size() const { return modes_.size(); }
  const std::vector<ModeId>& modes() const { return modes_; }
  const ModeId& operator[](std::size_t i) const { return modes_[i]; }

  std::optional<std::size_t> find(const ModeId& id) const;
  std::optional<std::size_t> find(const std::string& spatial, Polarization pol) const;
  /// Throws PlacementError if the mode is not registered.
  std::size_t index(const std::string& spatial, Polarization pol) const;
  bool has_port(const std::string& spatial) const;

  /// Distinct spatial labels in register order.
  std::vector<std::string> ports() const;

  /// Copy with the listed mode indices dropped; relative order is kept.
  ModeRegister without(std::span<const std::size_t> dropped) const;

  bool operator==(const ModeRegister& other) const { return modes_ == other.modes_; }

 private:
  std::vector<ModeId> modes_;
  std::map<ModeId, std::size_t> lookup_;
};

using RegisterPtr = std::shared_ptr<const ModeRegister>;

RegisterPtr make_register(ModeRegister reg);
RegisterPtr make_register(std::initializer_list<std::string> ports);
RegisterPtr make_register(std::span<const std::string> ports);

/// Photon counts per mode, in register order.
using Occupation = std::vector<std::uint8_t>;

inline constexpr int kMaxPhotonsPerMode = 9;
inline constexpr double kPruneThreshold = 1e-14;

int total_photons(const Occupation& occ);

/// Sparse pure state over a mode register. Amplitudes multiply normalized
/// Fock kets |n1,...,nM>, so probabilities are plain |amp|^2 sums. Terms are
/// kept sorted by occupation; amplitudes below kPruneThreshold are dropped.
class FockState {
 public:
  using TermMap = std::map<Occupation, Complex>;

  FockState() = default;
  FockState(RegisterPtr reg, TermMap terms);

  static FockState vacuum(RegisterPtr reg);

  const ModeRegister& modes() const { return *register_; }
  const RegisterPtr& register_ptr() const { return register_; }
  std::size_t mode_count() const { return register_ ? register_->size() : 0; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double norm2() const;
  Complex amplitude(const Occupation& occ) const;

  FockState scaled(Complex factor) const;
  /// Coherent sum of two states over the same register.
  FockState plus(const FockState& other) const;
  /// Same terms rescaled to unit norm; empty states are returned unchanged.
  FockState normalized() const;

 private:
  RegisterPtr register_;
  TermMap terms_;
};

FockState make_basis_state(RegisterPtr reg, const Occupation& occ);

/// Product of states over disjoint mode sets; the result register lists a's
/// modes then b's.
FockState tensor(const FockState& a, const FockState& b);

/// <a|b>, conjugate-linear in a.
Complex inner(const FockState& a, const FockState& b);

/// max |<n|a> - <n|b>| over the union of terms. Registers must match.
double max_abs_difference(const FockState& a, const FockState& b);

/// Re-expresses a state on a register containing all of its modes; the extra
/// modes are vacuum.
FockState embed(const FockState& state, RegisterPtr target);

/// (|H>a|H>b + |V>a|V>b)/sqrt2 over the register {a, b}.
FockState make_epr_pair(const std::string& port_a, const std::string& port_b);
/// (|H>a|V>b - |V>a|H>b)/sqrt2 over the register {a, b}.
FockState make_singlet(const std::string& port_a, const std::string& port_b);

/// alpha|H> + beta|V> for one photon in `port`. Unless auto_normalize is set,
/// |alpha|^2 + |beta|^2 must be 1 within 1e-9.
FockState encode_qubit(const std::string& port, Complex alpha, Complex beta,
                       bool auto_normalize = false);

/// Polarization qubits in the given ports, one photon each. `amplitudes` has
/// 2^n entries, first port most significant, H = 0.
FockState encode_qubits(std::span<const std::string> ports, std::span<const Complex> amplitudes);

/// Amplitudes indexed by (c, t1, t2), first qubit most significant, H = 0.
struct QubitVector3 {
  std::array<Complex, 8> amplitudes{};

  static constexpr std::size_t index(int c, int t1, int t2) { return (c << 2) | (t1 << 1) | t2; }
  double norm2() const;
};

/// Projects onto "exactly one photon in each listed port" and reads off the
/// 2^n polarization amplitudes. Terms outside that subspace are ignored; a term
/// inside it with photons elsewhere throws LeakageError.
std::vector<Complex> extract_qubits(const FockState& state, std::span<const std::string> ports);
QubitVector3 extract_qubit_vector(const FockState& state, const std::array<std::string, 3>& ports);

}  // namespace fredkin_lab
