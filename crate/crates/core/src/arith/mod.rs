//! Arithmetic functions on divisor lattices and the torus (Z/d)^{2g}:
//! orders, the Δ pairing, and the Φ family in sum and closed form.

mod phi;
mod torus;

pub use phi::{
    phi_check, phi_exponent, phi_g_closed, phi_g_sum, phi_st_closed, phi_st_lattice,
    phi_st_lattice_all_k, phi_st_sum, phi_stp_closed, phi_stp_sum, reduce_k,
};
pub use torus::{count_order_elements, delta_hat, delta_pair, TorusVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("torus vectors have different moduli: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("torus vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("torus vector length {0} is not a positive even number")]
    OddLength(usize),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{a} does not divide {d}")]
    NotDivisor { d: u32, a: u32 },
    #[error("parameter must be positive")]
    ZeroParameter,
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("lattice character sum is not a rational integer")]
    IrrationalLatticeSum,
}
