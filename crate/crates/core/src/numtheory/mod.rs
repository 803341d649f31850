//! Integer arithmetic underneath the identities and the witness construction.

mod mobius;
mod modular;
mod primes;

pub use mobius::{mertens, sieve_mobius, MobiusTable};
pub use modular::{
    crt_combine, legendre_symbol, lift_sqrt_to_prime_square, mod_inverse, sqrt_mod_prime, ResidueClass,
};
pub use primes::{is_prime, is_prime_u64, primes_pm1_mod8, PRIME_SEARCH_CAP};
