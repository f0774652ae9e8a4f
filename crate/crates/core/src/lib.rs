//! Exact arithmetic and finite group machinery behind explicit surjectivity
//! results for mod-ℓ Galois images of abelian surfaces and `GL₂`-type
//! varieties.
//!
//! The crate is `no_std` (it needs `alloc`). It contains:
//!
//! - [`bounds`]: the isogeny bound function `b(d, g, h)`, the per-case
//!   surjectivity thresholds, and certified comparison of primes against them;
//! - [`field`]: arithmetic in `F_{ℓⁿ}` for `n ≤ 4`;
//! - [`matrix`] and [`symplectic`]: small dense matrices, similitudes of the
//!   standard symplectic form, the twisted-cubic embedding, group closure,
//!   commutants and invariant subspaces;
//! - [`classify`], [`dickson`] and [`products`]: subgroup recognition in
//!   `GSp₄(F_ℓ)`, `GL₂(F_q)` and products of `SL₂`'s;
//! - [`inertia`]: the tame-inertia character bookkeeping used to rule out the
//!   twisted cubic and small projective images.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop, clippy::large_enum_variant)]

extern crate alloc;

pub mod bounds;
pub mod classify;
pub mod dickson;
pub mod field;
pub mod inertia;
pub mod matrix;
pub mod planted;
pub mod primes;
pub mod products;
pub mod symplectic;

pub use rand_chacha::ChaCha8Rng as Rng;

/// Seed used whenever the caller does not provide one.
pub const DEFAULT_SEED: u64 = 0x6a1b_5eed_2015_0604;

/// Builds the crate's PRNG (ChaCha8) from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    use rand_core::SeedableRng;
    Rng::seed_from_u64(seed)
}

/// Uniform integer in `0..n` by rejection sampling (`n ≥ 1`).
pub fn uniform(rng: &mut impl rand_core::RngCore, n: u64) -> u64 {
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}
