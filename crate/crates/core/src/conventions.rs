//! Sign and normalization conventions, fixed once for the whole crate.

/// Chirality operator is `CHIRALITY_SIGN · Γ_0 Γ_1 … Γ_9`, chosen so that
/// even forms (`Δ_c^+`) have chirality `+1`.
pub const CHIRALITY_SIGN: i8 = 1;

/// A transverse 4-plane with frame directions `i < j < k < l` is oriented
/// by `PLANE_ORIENTATION · e^i∧e^j∧e^k∧e^l`.
///
/// With this sign the compact stabilizer algebras acting on a 4-plane are
/// anti-self-dual, and so are the 2-forms on the 6789-plane whose gaugino
/// operator annihilates `1 + e_{1234}`.
pub const PLANE_ORIENTATION: i8 = -1;

/// Frame directions spanning the lightcone; `e^0 − e^5` is the null
/// 1-form of `1 + e_{1234}`.
pub const LIGHTCONE: [usize; 2] = [0, 5];

/// `∇̂ = ∇ + TORSION_SIGN · (1/2) H`, i.e. `Γ̂^M_{NP} = Γ^M_{NP} + TORSION_SIGN · (1/2) H^M_{NP}`.
pub const TORSION_SIGN: i8 = 1;

/// String backgrounds use `e⁻ = LIGHTCONE_SIGN (e^0 − e^5)/√2` and
/// `e⁺ = −LIGHTCONE_SIGN (e^0 + e^5)/√2`, so `e⁻` is along the null 1-form
/// of the parallel spinors.
pub const LIGHTCONE_SIGN: i8 = 1;
