//! Cross-module integration checks: identities whose two sides live in
//! different subsystems of the engine.

use std::sync::Arc;
use std::time::{Duration, Instant};

use tautring::cohom::{self, CohomModel};
use tautring::config::EngineConfig;
use tautring::fano::{self, FanoSquareRing, RelationCoefficients};
use tautring::grassmann::{self, GrassmannRing};
use tautring::k3::K3PowerRing;
use tautring::linalg::DenseMatrix;
use tautring::report::CheckStatus;
use tautring::ring::{CycleElement, Monomial};
use tautring::Scalar;

fn models() -> (Arc<CohomModel>, Arc<CohomModel>) {
    let cfg = EngineConfig::default();
    let g4 = Scalar::from_int(108);
    (
        CohomModel::fano(&cfg, &g4).unwrap(),
        CohomModel::fano_square(&cfg, &g4).unwrap(),
    )
}

fn square() -> FanoSquareRing {
    let gr = GrassmannRing::new();
    let numbers = grassmann::fano_intersection_numbers(&gr);
    FanoSquareRing::build(
        &numbers,
        &RelationCoefficients::builtin(),
        &Scalar::from_int(3),
        true,
    )
    .unwrap()
}

#[test]
fn degree_four_generator_gram_matrix_has_full_rank() {
    // the twelve degree-4 generators of the square pair nondegenerately,
    // with entries supplied by the contraction-integral oracle
    let sq = square();
    let (_, model) = models();
    let map = sq.cycle_map(&model).unwrap();
    let classes: Vec<_> = sq
        .generator_table(4)
        .iter()
        .map(|x| map.apply(x))
        .collect();
    assert_eq!(classes.len(), 12);
    let gram = DenseMatrix::from_fn(12, 12, |i, j| classes[i].pair(&classes[j]));
    let (rref, pivots) = gram.rref();
    assert_eq!(pivots.len(), 12, "full rank");
    assert_eq!(rref.rank(), 12);
}

#[test]
fn top_classes_span_a_line() {
    // all three top monomials are multiples of the point class, so the
    // matrix of products of their integrals has rank one
    let gr = GrassmannRing::new();
    let numbers = grassmann::fano_intersection_numbers(&gr);
    let integrals = [numbers.g4, numbers.g2c, numbers.c2];
    let gram = DenseMatrix::from_fn(3, 3, |i, j| &integrals[i] * &integrals[j]);
    assert_eq!(gram.rank(), 1);
}

#[test]
fn degree5_relation_checks_on_the_bare_presentation() {
    let gr = GrassmannRing::new();
    let numbers = grassmann::fano_intersection_numbers(&gr);
    let without = FanoSquareRing::build(
        &numbers,
        &RelationCoefficients::builtin(),
        &Scalar::from_int(3),
        false,
    )
    .unwrap();
    let (_, model) = models();
    let entries = fano::verify_theorem_a(
        &without.fano,
        &model,
        &RelationCoefficients::builtin(),
        &Scalar::from_int(3),
    );
    assert_eq!(entries.len(), 3);
    for e in &entries {
        assert_eq!(e.status, CheckStatus::Pass, "{}: {}", e.id, e.residual);
    }
    // perturbing the first coefficient of Q breaks the identity
    let mut bad = RelationCoefficients::builtin();
    bad.q.add_term([4, 1, 0, 0], Scalar::one());
    let entries = fano::verify_theorem_a(&without.fano, &model, &bad, &Scalar::from_int(3));
    assert_eq!(entries[0].status, CheckStatus::Fail);
    assert_ne!(entries[0].residual, "0", "residual class is printed");
}

#[test]
fn diagonal_is_swap_symmetric() {
    let (_, model) = models();
    let diag = cohom::diagonal_class(&model).unwrap();
    assert!(diag.transpose().eq_class(&diag));
}

#[test]
fn k3_monomial_listing_order() {
    // quartic square, degree 2: the published enumeration order
    let sq = K3PowerRing::build(2, 4);
    let names: Vec<String> = sq
        .ring
        .monomials(2)
        .iter()
        .map(|m| {
            CycleElement::from_terms(&sq.ring, 2, vec![(m.clone(), Scalar::one())]).render()
        })
        .collect();
    assert_eq!(names, vec!["h1^2", "h1*h2", "h2^2", "o1", "o2", "D12"]);
}

#[test]
fn fano_monomials_and_quotient_bases() {
    let gr = GrassmannRing::new();
    let numbers = grassmann::fano_intersection_numbers(&gr);
    let fano = tautring::fano::FanoRing::new(&numbers);
    let names: Vec<String> = fano
        .ring
        .monomials(2)
        .iter()
        .map(|m| CycleElement::from_terms(&fano.ring, 2, vec![(m.clone(), Scalar::one())]).render())
        .collect();
    assert_eq!(names, vec!["g^2", "c"]);
    // degree-3 and degree-4 bases collapse onto powers of the polarization
    assert_eq!(fano.ring.basis(3), vec![Monomial::from_pairs(2, &[(0, 3)])]);
    assert_eq!(fano.ring.basis(4), vec![Monomial::from_pairs(2, &[(0, 4)])]);
}

#[test]
fn k3_fourth_power_injectivity_within_budget() {
    let start = Instant::now();
    let cfg = EngineConfig::default();
    for d in [2u32, 4] {
        let ring = K3PowerRing::build(4, d);
        let entry = ring.injectivity_check(&cfg);
        assert_eq!(entry.status, CheckStatus::Pass, "{}", entry.residual);
    }
    assert!(start.elapsed() < Duration::from_secs(300));
}
