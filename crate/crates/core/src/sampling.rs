//! Seeded random draws used by sampled checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groups::{Group, GroupElement};
use crate::C64;

pub type CheckRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CheckRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Half-width of the coordinate box sampled on lattice groups.
pub const LATTICE_BOX: i64 = 8;

/// Number of triples drawn when a lattice check cannot be exhaustive.
pub const LATTICE_TRIPLES: usize = 1024;

/// Complex number with real and imaginary parts uniform on [−1, 1).
pub fn complex(rng: &mut CheckRng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// A uniformly drawn element: any element of a finite group, or a point of
/// the box `[−radius, radius]^D` on a lattice.
pub fn element(group: &Group, rng: &mut CheckRng, radius: i64) -> GroupElement {
    match group.order() {
        Some(n) => group.element(rng.random_range(0..n)),
        None => GroupElement::Vector(
            (0..group.rank())
                .map(|_| rng.random_range(-radius..=radius))
                .collect(),
        ),
    }
}

/// Terms drawn for random lattice elements.
pub const LATTICE_TERMS: usize = 6;

/// Radius of the box random lattice elements are supported in.
pub const LATTICE_SUPPORT_RADIUS: i64 = 5;

/// Random function: dense on finite groups, [`LATTICE_TERMS`] random points
/// on lattices.
pub fn function(group: &Group, rng: &mut CheckRng) -> crate::GroupFunction {
    match group.order() {
        Some(n) => {
            crate::GroupFunction::from_pairs((0..n).map(|i| (group.element(i), complex(rng))))
        }
        None => crate::GroupFunction::from_pairs(
            (0..LATTICE_TERMS).map(|_| (element(group, rng, LATTICE_SUPPORT_RADIUS), complex(rng))),
        ),
    }
}

/// Random algebra element with coefficients drawn as in [`function`].
pub fn algebra_element(
    algebra: &std::sync::Arc<crate::Algebra>,
    rng: &mut CheckRng,
) -> crate::AlgebraElement {
    let f = function(algebra.group(), rng);
    crate::integration::embed(algebra, &f).expect("drawn from the algebra's group")
}
