//! Seeded generators for property sweeps.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::equivariant::{ComponentAlgebra, EquivariantElement};
use crate::poly::{GradedPoly, LinearForm, Monomial};
use crate::scalar::Scalar;
use crate::simplicial::{full_subcomplex, Simplex, SimplicialComplex, SubcomplexSelection};

/// A complex on 3–7 vertices with at most `max_simplices` simplices.
pub fn random_complex<R: Rng>(rng: &mut R, max_simplices: usize) -> SimplicialComplex {
    let n = rng.gen_range(3..=7);
    let mut generators: Vec<Simplex> = (0..n).map(|v| vec![v]).collect();
    let attempts = rng.gen_range(1..=8);
    for _ in 0..attempts {
        let size = rng.gen_range(2..=n.min(4));
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(rng);
        vs.truncate(size);
        generators.push(vs);
        let x = SimplicialComplex::with_numbered_vertices(n, &generators).expect("valid generators");
        if x.num_simplices() > max_simplices {
            generators.pop();
        }
    }
    SimplicialComplex::with_numbered_vertices(n, &generators).expect("valid generators")
}

/// Full subcomplex on a random vertex subset (possibly empty or everything).
pub fn random_full_subcomplex<R: Rng>(rng: &mut R, x: &SimplicialComplex) -> SubcomplexSelection {
    let vs: Vec<usize> = (0..x.num_vertices()).filter(|_| rng.gen_bool(0.5)).collect();
    full_subcomplex(x, vs).expect("vertices in range")
}

pub fn random_scalar<F: Scalar, R: Rng>(rng: &mut R, bound: i64) -> F {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound.max(1));
    F::from_int(n) / F::from_int(d)
}

pub fn random_nonzero_form<R: Rng>(rng: &mut R, num_vars: usize) -> LinearForm {
    loop {
        let l = LinearForm::new((0..num_vars).map(|_| rng.gen_range(-3..=3)).collect());
        if !l.is_zero() {
            return l;
        }
    }
}

pub fn random_poly<F: Scalar, R: Rng>(rng: &mut R, num_vars: usize, max_degree: u32, terms: usize) -> GradedPoly<F> {
    GradedPoly::from_terms(
        num_vars,
        (0..terms).map(|_| {
            let mut e = vec![0; num_vars];
            for _ in 0..rng.gen_range(0..=max_degree) {
                e[rng.gen_range(0..num_vars)] += 1;
            }
            (Monomial(e), random_scalar(rng, 4))
        }),
    )
}

/// Monomial algebra of dimension `dim` on one or two generators.
pub fn random_algebra<F: Scalar, R: Rng>(rng: &mut R, dim: usize) -> ComponentAlgebra<F> {
    let gens = rng.gen_range(1..=2);
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    set.insert(vec![0; gens]);
    while set.len() < dim {
        // candidates whose every predecessor is present keep the set downward closed
        let candidates: Vec<Vec<u32>> = set
            .iter()
            .flat_map(|e| {
                (0..gens).map(move |i| {
                    let mut c = e.clone();
                    c[i] += 1;
                    c
                })
            })
            .filter(|c| !set.contains(c))
            .filter(|c| {
                (0..gens).all(|i| {
                    c[i] == 0 || {
                        let mut d = c.clone();
                        d[i] -= 1;
                        set.contains(&d)
                    }
                })
            })
            .collect();
        let pick = candidates.choose(rng).expect("a downward-closed extension exists").clone();
        set.insert(pick);
    }
    let exps: Vec<Vec<u32>> = set.into_iter().collect();
    ComponentAlgebra::monomial(&exps).expect("downward closed")
}

/// `(c · ∏ ℓ_j · 1 + n) / D` with `n` nilpotent: invertible after localization.
pub fn random_invertible_element<F: Scalar, R: Rng>(rng: &mut R, max_dim: usize) -> EquivariantElement<F> {
    let num_vars = rng.gen_range(1..=3);
    let dim = rng.gen_range(1..=max_dim);
    let algebra = Arc::new(random_algebra::<F, R>(rng, dim));
    let mut lead = GradedPoly::constant(num_vars, loop {
        let c: F = random_scalar(rng, 5);
        if !c.is_zero() {
            break c;
        }
    });
    for _ in 0..rng.gen_range(0..=2) {
        lead = lead.mul(&random_nonzero_form(rng, num_vars).to_poly());
    }
    let coeffs = (0..algebra.dim())
        .map(|i| if i == algebra.unit_index() { lead.clone() } else { random_poly(rng, num_vars, 2, 2) })
        .collect();
    let den: Vec<(LinearForm, u32)> =
        (0..rng.gen_range(0..=1)).map(|_| (random_nonzero_form(rng, num_vars), 1)).collect();
    EquivariantElement::new(algebra, coeffs, den).expect("consistent shapes")
}

/// Between zero and `r − 1` integer vectors in `Z^r`.
pub fn random_proper_subtorus<R: Rng>(rng: &mut R, r: usize) -> Vec<Vec<i64>> {
    let k = rng.gen_range(0..r);
    (0..k).map(|_| (0..r).map(|_| rng.gen_range(-3..=3)).collect()).collect()
}
