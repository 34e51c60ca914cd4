//! Contraction-monomial model of the algebraic part of the cohomology of
//! the Fano fourfold `F`, of `F x F`, and of powers of a polarized K3
//! surface.
//!
//! Classes are words in a small alphabet: polarization insertions (`g`,
//! `h_i`), point classes (`o_i`), the form-dual class `b` on each fourfold
//! factor, the Künneth form class `B` across the two fourfold factors, and
//! transcendental Künneth classes `K_ij` across K3 factors. Top-degree
//! integrals are evaluated by summing over perfect matchings of the slots
//! of each factor: a closed loop contributes the trace of its contraction
//! (the second Betti number 23, or the transcendental rank 21), a chain
//! between two polarization insertions contributes the polarization square
//! (`q(g) = 6`, or the K3 degree `d`), and chains mixing the polarization
//! with a transcendental contraction vanish. The orthogonal complements are
//! never coordinatized; the trace and the form values are the only numeric
//! inputs.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::config::EngineConfig;
use crate::linalg::{DenseMatrix, SolveOutcome};
use crate::ring::{CycleElement, Monomial};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Fano,
    FanoSquare,
    K3Power { r: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Contraction {
    /// Dual of the full intersection form on degree-2 cohomology.
    Full,
    /// Dual of the form restricted to the transcendental part.
    Transcendental,
}

#[derive(Clone, Debug)]
enum LetterKind {
    /// Polarization insertion on one factor (degree 1).
    Insertion(usize),
    /// Point class on one factor (degree 2), integral 1, no slots.
    Point(usize),
    /// A two-slot contraction; the two slots live on the given factors
    /// (equal for an in-factor form dual, distinct for a Künneth class).
    Contract(usize, usize, Contraction),
}

#[derive(Clone, Debug)]
struct Letter {
    name: String,
    kind: LetterKind,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("polarization data inconsistent: fujiki * q_g^2 = {0}, expected {1}")]
    FujikiMismatch(Scalar, Scalar),
    #[error("q_g must be positive, got {0}")]
    NonPositiveQ(Scalar),
    #[error("integral of a class of degree {0}; top degree is {1}")]
    NotTopDegree(u32, u32),
    #[error("diagonal system inconsistent at degree {0}")]
    DiagonalInconsistent(u32),
    #[error("unsupported generator `{0}` for the cycle class map")]
    UnsupportedGenerator(String),
}

pub struct CohomModel {
    id: u64,
    name: String,
    pub space: Space,
    factors: usize,
    factor_top: u32,
    letters: Vec<Letter>,
    /// Square of the polarization on one factor (`q(g)` or `d`).
    pol_square: Scalar,
    /// Trace of the full form dual (second Betti number of the factor).
    full_trace: Scalar,
    /// Trace of the transcendental contraction.
    trans_trace: Scalar,
    monomial_cache: RwLock<HashMap<u32, Arc<MonomialTable>>>,
    diagonal: RwLock<Option<CohomClass>>,
}

struct MonomialTable {
    monomials: Vec<Monomial>,
    #[allow(dead_code)]
    index: HashMap<Monomial, usize>,
}

static NEXT_MODEL_ID: AtomicU64 = AtomicU64::new(1);

impl CohomModel {
    /// Model of `H*(F)` on the alphabet `{g, b}`. The startup cross-check
    /// derives `q(g)` from the Grassmannian value of the top self-
    /// intersection of `g` and rejects inconsistent configuration.
    pub fn fano(cfg: &EngineConfig, expected_g4: &Scalar) -> Result<Arc<CohomModel>, ModelError> {
        check_polarization(cfg, expected_g4)?;
        Ok(Arc::new(CohomModel {
            id: NEXT_MODEL_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: "H(F)".into(),
            space: Space::Fano,
            factors: 1,
            factor_top: 4,
            letters: vec![
                Letter {
                    name: "g".into(),
                    kind: LetterKind::Insertion(0),
                },
                Letter {
                    name: "b".into(),
                    kind: LetterKind::Contract(0, 0, Contraction::Full),
                },
            ],
            pol_square: cfg.q_g.clone(),
            full_trace: Scalar::from_int(cfg.b2_f as i64),
            trans_trace: Scalar::from_int(cfg.b2_f as i64),
            monomial_cache: RwLock::new(HashMap::new()),
            diagonal: RwLock::new(None),
        }))
    }

    /// Model of `H*(F x F)` on `{g1, g2, b1, b2, B}`.
    pub fn fano_square(
        cfg: &EngineConfig,
        expected_g4: &Scalar,
    ) -> Result<Arc<CohomModel>, ModelError> {
        check_polarization(cfg, expected_g4)?;
        Ok(Arc::new(CohomModel {
            id: NEXT_MODEL_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: "H(FxF)".into(),
            space: Space::FanoSquare,
            factors: 2,
            factor_top: 4,
            letters: vec![
                Letter {
                    name: "g1".into(),
                    kind: LetterKind::Insertion(0),
                },
                Letter {
                    name: "g2".into(),
                    kind: LetterKind::Insertion(1),
                },
                Letter {
                    name: "b1".into(),
                    kind: LetterKind::Contract(0, 0, Contraction::Full),
                },
                Letter {
                    name: "b2".into(),
                    kind: LetterKind::Contract(1, 1, Contraction::Full),
                },
                Letter {
                    name: "B".into(),
                    kind: LetterKind::Contract(0, 1, Contraction::Full),
                },
            ],
            pol_square: cfg.q_g.clone(),
            full_trace: Scalar::from_int(cfg.b2_f as i64),
            trans_trace: Scalar::from_int(cfg.b2_f as i64),
            monomial_cache: RwLock::new(HashMap::new()),
            diagonal: RwLock::new(None),
        }))
    }

    /// Model of `H*(S^r)` on `{h_i, o_i, K_ij}` for a polarized K3 surface
    /// of degree `d`.
    pub fn k3_power(r: usize, cfg: &EngineConfig) -> Arc<CohomModel> {
        assert!(r >= 1, "power must be at least 1");
        let mut letters = Vec::new();
        for i in 0..r {
            letters.push(Letter {
                name: format!("h{}", i + 1),
                kind: LetterKind::Insertion(i),
            });
        }
        for i in 0..r {
            letters.push(Letter {
                name: format!("o{}", i + 1),
                kind: LetterKind::Point(i),
            });
        }
        for i in 0..r {
            for j in (i + 1)..r {
                letters.push(Letter {
                    name: format!("K{}{}", i + 1, j + 1),
                    kind: LetterKind::Contract(i, j, Contraction::Transcendental),
                });
            }
        }
        Arc::new(CohomModel {
            id: NEXT_MODEL_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: format!("H(S^{r})"),
            space: Space::K3Power { r },
            factors: r,
            factor_top: 2,
            letters,
            pol_square: Scalar::from_int(cfg.polarization_degree_d as i64),
            full_trace: Scalar::from_int(22),
            trans_trace: Scalar::from_int(cfg.transcendental_rank_k3 as i64),
            monomial_cache: RwLock::new(HashMap::new()),
            diagonal: RwLock::new(None),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn top_degree(&self) -> u32 {
        self.factor_top * self.factors as u32
    }

    pub fn width(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    pub fn letter_name(&self, idx: usize) -> &str {
        &self.letters[idx].name
    }

    /// Square of the polarization class of one factor.
    pub fn pol_square(&self) -> &Scalar {
        &self.pol_square
    }

    /// Trace of the full degree-2 contraction (second Betti number).
    pub fn full_trace(&self) -> &Scalar {
        &self.full_trace
    }

    fn letter_degree(&self, idx: usize) -> u32 {
        match self.letters[idx].kind {
            LetterKind::Insertion(_) => 1,
            LetterKind::Point(_) => 2,
            LetterKind::Contract(..) => 2,
        }
    }

    pub fn factor_degree(&self, word: &Monomial, factor: usize) -> u32 {
        let mut d = 0;
        for (idx, &e) in word.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            d += e as u32
                * match self.letters[idx].kind {
                    LetterKind::Insertion(f) => u32::from(f == factor),
                    LetterKind::Point(f) => 2 * u32::from(f == factor),
                    LetterKind::Contract(f1, f2, _) => {
                        u32::from(f1 == factor) + u32::from(f2 == factor)
                    }
                };
        }
        d
    }

    pub fn word_degree(&self, word: &Monomial) -> u32 {
        (0..self.factors)
            .map(|f| self.factor_degree(word, f))
            .sum()
    }

    /// Contraction monomials of total degree `d` whose per-factor degrees
    /// stay within the factor dimension, deterministic descending
    /// graded-lex order.
    pub fn monomials(&self, d: u32) -> Vec<Monomial> {
        self.monomial_table(d).monomials.clone()
    }

    fn monomial_table(&self, d: u32) -> Arc<MonomialTable> {
        if let Some(t) = self.monomial_cache.read().unwrap().get(&d) {
            return Arc::clone(t);
        }
        let mut out = Vec::new();
        let mut current = vec![0u8; self.letters.len()];
        self.enumerate(0, d, &mut current, &mut out);
        out.sort_by(|a, b| b.exponents().cmp(a.exponents()));
        let index = out
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let table = Arc::new(MonomialTable {
            monomials: out,
            index,
        });
        self.monomial_cache
            .write()
            .unwrap()
            .entry(d)
            .or_insert_with(|| Arc::clone(&table));
        Arc::clone(self.monomial_cache.read().unwrap().get(&d).unwrap())
    }

    fn enumerate(&self, idx: usize, remaining: u32, current: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if remaining == 0 || idx == self.letters.len() {
            if remaining == 0 {
                let pairs: Vec<(usize, u8)> = current
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                let m = Monomial::from_pairs(self.letters.len(), &pairs);
                if (0..self.factors).all(|f| self.factor_degree(&m, f) <= self.factor_top) {
                    out.push(m);
                }
            }
            return;
        }
        let ld = self.letter_degree(idx);
        let max_e = remaining / ld;
        for e in 0..=max_e {
            current[idx] = e as u8;
            self.enumerate(idx + 1, remaining - e * ld, current, out);
        }
        current[idx] = 0;
    }

    /// Exact top-degree integral of a single word, by summing over the
    /// perfect matchings of the slots of every factor.
    pub fn wick_word(&self, word: &Monomial) -> Scalar {
        for f in 0..self.factors {
            if self.factor_degree(word, f) != self.factor_top {
                return Scalar::zero();
            }
        }
        // Slots: per factor, each slot optionally carries the id of the
        // structural contraction edge it terminates.
        let mut slots_per_factor: Vec<Vec<Option<usize>>> = vec![Vec::new(); self.factors];
        let mut edges: Vec<Contraction> = Vec::new();
        let mut edge_ends: Vec<[(usize, usize); 2]> = Vec::new();
        for (idx, &e) in word.exponents().iter().enumerate() {
            for _ in 0..e {
                match self.letters[idx].kind {
                    LetterKind::Insertion(f) => slots_per_factor[f].push(None),
                    LetterKind::Point(_) => {}
                    LetterKind::Contract(f1, f2, c) => {
                        let edge = edges.len();
                        edges.push(c);
                        slots_per_factor[f1].push(Some(edge));
                        let s1 = slots_per_factor[f1].len() - 1;
                        slots_per_factor[f2].push(Some(edge));
                        let s2 = slots_per_factor[f2].len() - 1;
                        edge_ends.push([(f1, s1), (f2, s2)]);
                    }
                }
            }
        }
        let per_factor_matchings: Vec<Vec<Vec<(usize, usize)>>> = slots_per_factor
            .iter()
            .map(|slots| perfect_matchings(slots.len()))
            .collect();
        if per_factor_matchings.iter().any(|m| m.is_empty()) {
            return Scalar::zero();
        }
        let mut total = Scalar::zero();
        let mut choice = vec![0usize; self.factors];
        loop {
            let selected: Vec<&Vec<(usize, usize)>> = (0..self.factors)
                .map(|f| &per_factor_matchings[f][choice[f]])
                .collect();
            total += self.evaluate_matching(&slots_per_factor, &edges, &edge_ends, &selected);
            let mut f = 0;
            loop {
                if f == self.factors {
                    return total;
                }
                choice[f] += 1;
                if choice[f] < per_factor_matchings[f].len() {
                    break;
                }
                choice[f] = 0;
                f += 1;
            }
        }
    }

    fn evaluate_matching(
        &self,
        slots_per_factor: &[Vec<Option<usize>>],
        edges: &[Contraction],
        edge_ends: &[[(usize, usize); 2]],
        matching: &[&Vec<(usize, usize)>],
    ) -> Scalar {
        let mut value = Scalar::one();
        let mut visited: Vec<Vec<bool>> = slots_per_factor
            .iter()
            .map(|s| vec![false; s.len()])
            .collect();
        let matching_partner = |f: usize, s: usize| -> (usize, usize) {
            for &(a, b) in matching[f] {
                if a == s {
                    return (f, b);
                }
                if b == s {
                    return (f, a);
                }
            }
            unreachable!("slot must be matched")
        };
        let structural_partner = |f: usize, s: usize| -> Option<((usize, usize), Contraction)> {
            let edge = slots_per_factor[f][s]?;
            let ends = &edge_ends[edge];
            let other = if ends[0] == (f, s) { ends[1] } else { ends[0] };
            Some((other, edges[edge]))
        };
        // paths start at polarization slots
        for f0 in 0..slots_per_factor.len() {
            for s0 in 0..slots_per_factor[f0].len() {
                if visited[f0][s0] || slots_per_factor[f0][s0].is_some() {
                    continue;
                }
                let mut transcendental = false;
                let (mut f, mut s) = (f0, s0);
                visited[f][s] = true;
                loop {
                    let (nf, ns) = matching_partner(f, s);
                    visited[nf][ns] = true;
                    match structural_partner(nf, ns) {
                        None => break,
                        Some(((tf, ts), kind)) => {
                            if kind == Contraction::Transcendental {
                                transcendental = true;
                            }
                            visited[tf][ts] = true;
                            f = tf;
                            s = ts;
                        }
                    }
                }
                if transcendental {
                    return Scalar::zero();
                }
                value *= self.pol_square.clone();
            }
        }
        // remaining components are cycles
        for f0 in 0..slots_per_factor.len() {
            for s0 in 0..slots_per_factor[f0].len() {
                if visited[f0][s0] {
                    continue;
                }
                let mut transcendental = false;
                let (mut f, mut s) = (f0, s0);
                loop {
                    visited[f][s] = true;
                    let (nf, ns) = matching_partner(f, s);
                    visited[nf][ns] = true;
                    let ((tf, ts), kind) =
                        structural_partner(nf, ns).expect("cycle slots are structural");
                    if kind == Contraction::Transcendental {
                        transcendental = true;
                    }
                    if (tf, ts) == (f0, s0) {
                        break;
                    }
                    f = tf;
                    s = ts;
                }
                value *= if transcendental {
                    self.trans_trace.clone()
                } else {
                    self.full_trace.clone()
                };
            }
        }
        value
    }

    /// Rank of the pairing between degree-`d` and complementary-degree
    /// contraction monomials (the dimension of the modeled span). The
    /// pairing is block-diagonal over factor-degree profiles, which keeps
    /// the eliminations small.
    pub fn gram_rank(&self, d: u32) -> usize {
        let top = self.top_degree();
        assert!(d <= top, "degree beyond the grading");
        let left = self.monomial_table(d);
        let right = self.monomial_table(top - d);
        let profile = |m: &Monomial| -> Vec<u32> {
            (0..self.factors)
                .map(|f| self.factor_degree(m, f))
                .collect()
        };
        let mut left_groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (i, m) in left.monomials.iter().enumerate() {
            left_groups.entry(profile(m)).or_default().push(i);
        }
        let mut right_groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (j, m) in right.monomials.iter().enumerate() {
            right_groups.entry(profile(m)).or_default().push(j);
        }
        let mut rank = 0;
        for (p, lidx) in &left_groups {
            let complement: Vec<u32> = p.iter().map(|&x| self.factor_top - x).collect();
            let Some(ridx) = right_groups.get(&complement) else {
                continue;
            };
            let block = DenseMatrix::from_fn(lidx.len(), ridx.len(), |i, j| {
                self.wick_word(&left.monomials[lidx[i]].mul(&right.monomials[ridx[j]]))
            });
            rank += block.rank();
        }
        rank
    }
}

fn check_polarization(cfg: &EngineConfig, expected_g4: &Scalar) -> Result<(), ModelError> {
    if cfg.q_g.is_negative() || cfg.q_g.is_zero() {
        return Err(ModelError::NonPositiveQ(cfg.q_g.clone()));
    }
    let got = &cfg.fujiki_constant * &(&cfg.q_g * &cfg.q_g);
    if &got != expected_g4 {
        return Err(ModelError::FujikiMismatch(got, expected_g4.clone()));
    }
    Ok(())
}

fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n % 2 == 1 {
        return Vec::new();
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    fn rec(
        remaining: &[usize],
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if remaining.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = remaining[0];
        for k in 1..remaining.len() {
            let second = remaining[k];
            let rest: Vec<usize> = remaining[1..]
                .iter()
                .copied()
                .filter(|&x| x != second)
                .collect();
            acc.push((first, second));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    let items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(&items, &mut Vec::new(), &mut out);
    out
}

/// An element of the contraction-monomial span. Equality is decided by the
/// Gram pairing: two classes are equal when their difference pairs to zero
/// with every monomial of complementary degree.
#[derive(Clone)]
pub struct CohomClass {
    model: Arc<CohomModel>,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl CohomClass {
    pub fn zero(model: &Arc<CohomModel>, degree: u32) -> Self {
        CohomClass {
            model: Arc::clone(model),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(model: &Arc<CohomModel>) -> Self {
        CohomClass {
            model: Arc::clone(model),
            degree: 0,
            terms: BTreeMap::from([(Monomial::unit(model.width()), Scalar::one())]),
        }
    }

    pub fn letter(model: &Arc<CohomModel>, name: &str) -> Self {
        let idx = model
            .letter_index(name)
            .unwrap_or_else(|| panic!("no letter `{name}` in {}", model.name()));
        let m = Monomial::from_pairs(model.width(), &[(idx, 1)]);
        let degree = model.word_degree(&m);
        CohomClass {
            model: Arc::clone(model),
            degree,
            terms: BTreeMap::from([(m, Scalar::one())]),
        }
    }

    pub fn from_terms(model: &Arc<CohomModel>, degree: u32, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            debug_assert_eq!(model.word_degree(&m), degree);
            if (0..model.factors).any(|f| model.factor_degree(&m, f) > model.factor_top) {
                continue; // vanishes: exceeds the factor dimension
            }
            let e = map.entry(m).or_insert_with(Scalar::zero);
            *e += c;
        }
        map.retain(|_, c| !c.is_zero());
        CohomClass {
            model: Arc::clone(model),
            degree,
            terms: map,
        }
    }

    pub fn model(&self) -> &Arc<CohomModel> {
        &self.model
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &CohomClass) -> CohomClass {
        assert_eq!(self.model.id, other.model.id, "model mismatch");
        if self.terms.is_empty() {
            return other.clone();
        }
        if other.terms.is_empty() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *e += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        CohomClass {
            model: Arc::clone(&self.model),
            degree: self.degree,
            terms,
        }
    }

    pub fn sub(&self, other: &CohomClass) -> CohomClass {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> CohomClass {
        if s.is_zero() {
            return CohomClass::zero(&self.model, self.degree);
        }
        CohomClass {
            model: Arc::clone(&self.model),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &CohomClass) -> CohomClass {
        assert_eq!(self.model.id, other.model.id, "model mismatch");
        let degree = self.degree + other.degree;
        let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        CohomClass::from_terms(&self.model, degree, terms)
    }

    pub fn pow(&self, k: u32) -> CohomClass {
        let mut acc = CohomClass::one(&self.model);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact integral; errors unless the class has top degree.
    pub fn integrate(&self) -> Result<Scalar, ModelError> {
        if self.degree != self.model.top_degree() {
            return Err(ModelError::NotTopDegree(
                self.degree,
                self.model.top_degree(),
            ));
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            acc += c * &self.model.wick_word(m);
        }
        Ok(acc)
    }

    /// Gram pairing `∫ self * other` (degrees must be complementary).
    pub fn pair(&self, other: &CohomClass) -> Scalar {
        self.mul(other).integrate().expect("complementary degrees")
    }

    /// Zero as a cohomology class: pairs to zero against every monomial of
    /// complementary degree.
    pub fn is_zero_class(&self) -> bool {
        if self.terms.is_empty() || self.degree > self.model.top_degree() {
            return true;
        }
        let comp_degree = self.model.top_degree() - self.degree;
        let comp = self.model.monomials(comp_degree);
        comp.iter().all(|w| {
            let test = CohomClass::from_terms(
                &self.model,
                comp_degree,
                vec![(w.clone(), Scalar::one())],
            );
            self.pair(&test).is_zero()
        })
    }

    pub fn eq_class(&self, other: &CohomClass) -> bool {
        self.sub(other).is_zero_class()
    }

    /// Swaps the two factors of the square model.
    pub fn transpose(&self) -> CohomClass {
        assert_eq!(
            self.model.space,
            Space::FanoSquare,
            "transpose acts on the square model"
        );
        // g1<->g2, b1<->b2, B fixed
        let perm = [1usize, 0, 3, 2, 4];
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut pairs: Vec<(usize, u8)> = Vec::new();
                for (i, &exp) in m.exponents().iter().enumerate() {
                    if exp > 0 {
                        pairs.push((perm[i], exp));
                    }
                }
                (Monomial::from_pairs(perm.len(), &pairs), c.clone())
            })
            .collect();
        CohomClass::from_terms(&self.model, self.degree, terms)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| b.exponents().cmp(a.exponents()));
        let mut out = String::new();
        for (i, (m, c)) in ordered.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut name_parts = Vec::new();
            for (idx, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => name_parts.push(self.model.letters[idx].name.clone()),
                    _ => name_parts.push(format!("{}^{}", self.model.letters[idx].name, e)),
                }
            }
            let mono = name_parts.join("*");
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl std::fmt::Debug for CohomClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}; deg {}] {}",
            self.model.name(),
            self.degree,
            self.render()
        )
    }
}

/// Generator images realizing the cycle class map of a ring presentation
/// into a cohomology model.
pub struct CycleClassMap {
    ring_id: u64,
    model: Arc<CohomModel>,
    images: Vec<CohomClass>,
}

impl CycleClassMap {
    pub fn new(ring: &crate::ring::Ring, model: &Arc<CohomModel>, images: Vec<CohomClass>) -> Self {
        assert_eq!(images.len(), ring.width(), "one image per generator");
        for (g, img) in ring.generators().iter().zip(&images) {
            assert_eq!(g.degree, img.degree(), "degree of image of {}", g.name);
        }
        CycleClassMap {
            ring_id: ring.id(),
            model: Arc::clone(model),
            images,
        }
    }

    pub fn model(&self) -> &Arc<CohomModel> {
        &self.model
    }

    pub fn image(&self, gen: usize) -> &CohomClass {
        &self.images[gen]
    }

    /// Homomorphic image of a cycle under the generator assignment.
    pub fn apply(&self, x: &CycleElement) -> CohomClass {
        assert_eq!(x.ring().id(), self.ring_id, "wrong presentation");
        let mut acc = CohomClass::zero(&self.model, x.degree());
        for (m, c) in x.terms() {
            let mut word = CohomClass::one(&self.model);
            for (gen, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    word = word.mul(&self.images[gen].pow(e as u32));
                }
            }
            acc = acc.add(&word.scale(c));
        }
        acc
    }
}

/// Solves for exact coefficients expressing `target` in the span of
/// `family` inside the cohomology model: `target = sum_i coeff_i family_i`
/// as classes. Returns the canonical solution together with a basis of the
/// coefficient kernel (non-uniqueness of the expression); `None` when no
/// solution exists in the span.
pub fn derive_relation(
    target: &CohomClass,
    family: &[CohomClass],
) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    assert!(!family.is_empty(), "empty family");
    let model = target.model();
    let d = target.degree();
    for f in family {
        assert_eq!(f.degree(), d, "family degree mismatch");
    }
    let comp_degree = model.top_degree() - d;
    let tests = model.monomials(comp_degree);
    let matrix = DenseMatrix::from_fn(tests.len(), family.len(), |i, j| {
        let w = CohomClass::from_terms(model, comp_degree, vec![(tests[i].clone(), Scalar::one())]);
        family[j].pair(&w)
    });
    let rhs: Vec<Scalar> = tests
        .iter()
        .map(|t| {
            let w = CohomClass::from_terms(model, comp_degree, vec![(t.clone(), Scalar::one())]);
            target.pair(&w)
        })
        .collect();
    match matrix.solve(&rhs) {
        SolveOutcome::Solution { particular, kernel } => Some((particular, kernel)),
        SolveOutcome::Inconsistent => None,
    }
}

/// The Künneth diagonal class of a product model, solved inside the
/// contraction-monomial span from the defining property `∫ Δ·W = ∫ Δ*(W)`
/// for every monomial `W` of the middle degree, where `Δ*` is the
/// restriction substitution onto one factor.
pub fn diagonal_class(model: &Arc<CohomModel>) -> Result<CohomClass, ModelError> {
    if let Some(d) = model.diagonal.read().unwrap().as_ref() {
        return Ok(d.clone());
    }
    type Subst = Box<dyn Fn(&Monomial) -> (Monomial, Scalar)>;
    let (single, subst): (Arc<CohomModel>, Subst) = match model.space {
        Space::FanoSquare => {
            let cfg = EngineConfig {
                q_g: model.pol_square.clone(),
                b2_f: model.full_trace.to_i64().expect("integer trace") as u32,
                ..EngineConfig::default()
            };
            let g4 = &cfg.fujiki_constant * &(&cfg.q_g * &cfg.q_g);
            let single = CohomModel::fano(&cfg, &g4)?;
            // g1,g2 -> g; b1,b2,B -> b
            let f = move |m: &Monomial| -> (Monomial, Scalar) {
                let e = m.exponents();
                let g = e[0] + e[1];
                let b = e[2] + e[3] + e[4];
                (Monomial::from_pairs(2, &[(0, g), (1, b)]), Scalar::one())
            };
            (single, Box::new(f))
        }
        Space::K3Power { r: 2 } => {
            let cfg = EngineConfig {
                polarization_degree_d: model.pol_square.to_i64().expect("integer degree") as u32,
                transcendental_rank_k3: model.trans_trace.to_i64().expect("integer trace") as u32,
                ..EngineConfig::default()
            };
            let single = CohomModel::k3_power(1, &cfg);
            let trace = model.trans_trace.clone();
            // h_i -> h, o_i -> o, K12 -> trace * o
            let f = move |m: &Monomial| -> (Monomial, Scalar) {
                let e = m.exponents();
                let h = e[0] + e[1];
                let o = e[2] + e[3] + e[4];
                let coef = trace.pow(e[4] as u32);
                (Monomial::from_pairs(2, &[(0, h), (1, o)]), coef)
            };
            (single, Box::new(f))
        }
        _ => panic!("diagonal_class needs a two-factor model"),
    };

    let dim = model.factor_top;
    let unknowns = model.monomials(dim);
    let tests = model.monomials(dim);
    let matrix = DenseMatrix::from_fn(tests.len(), unknowns.len(), |i, j| {
        model.wick_word(&unknowns[j].mul(&tests[i]))
    });
    let rhs: Vec<Scalar> = tests
        .iter()
        .map(|w| {
            let (single_word, coef) = subst(w);
            if single.word_degree(&single_word) != single.top_degree() {
                return Scalar::zero();
            }
            &coef * &single.wick_word(&single_word)
        })
        .collect();
    let solution = match matrix.solve(&rhs) {
        SolveOutcome::Solution { particular, .. } => particular,
        SolveOutcome::Inconsistent => return Err(ModelError::DiagonalInconsistent(dim)),
    };
    let class = CohomClass::from_terms(
        model,
        dim,
        unknowns
            .into_iter()
            .zip(solution)
            .filter(|(_, c)| !c.is_zero())
            .collect(),
    );
    *model.diagonal.write().unwrap() = Some(class.clone());
    Ok(class)
}

/// Internal cross-validation of the polarized-fourfold model: the Fujiki
/// evaluation of `g^4`, the form-dual pairings, and the agreement of the
/// three intersection numbers with an externally supplied oracle.
pub fn fujiki_consistency(
    model: &Arc<CohomModel>,
    q_g: &Scalar,
    fujiki: &Scalar,
    b2: u32,
    oracle: &[(&str, Scalar, Scalar)],
) -> crate::report::CheckEntry {
    use crate::report::CheckEntry;
    assert_eq!(model.space, Space::Fano);
    let g = CohomClass::letter(model, "g");
    let b = CohomClass::letter(model, "b");
    let checks: Vec<(String, Scalar, Scalar)> = vec![
        (
            "∫g^4 = fujiki·q(g)^2".into(),
            g.pow(4).integrate().expect("top"),
            fujiki * &(q_g * q_g),
        ),
        (
            "∫b·g^2 = (b2+2)·q(g)".into(),
            g.pow(2).mul(&b).integrate().expect("top"),
            &Scalar::from_int(b2 as i64 + 2) * q_g,
        ),
        (
            "∫b^2 = b2·(b2+2)".into(),
            b.pow(2).integrate().expect("top"),
            Scalar::from_int(b2 as i64 * (b2 as i64 + 2)),
        ),
    ];
    let mut all: Vec<(String, Scalar, Scalar)> = checks;
    for (name, got, expected) in oracle {
        all.push((name.to_string(), got.clone(), expected.clone()));
    }
    for (name, got, expected) in &all {
        if got != expected {
            return CheckEntry::fail(
                "fujiki-consistency",
                "Fujiki evaluation agrees with the Schubert oracle",
                "Fujiki relation and Beauville-Bogomolov pairings",
                format!("{name}: {got} != {expected}"),
            );
        }
    }
    CheckEntry::pass(
        "fujiki-consistency",
        "Fujiki evaluation agrees with the Schubert oracle",
        "Fujiki relation and Beauville-Bogomolov pairings",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano_model() -> Arc<CohomModel> {
        CohomModel::fano(&EngineConfig::default(), &Scalar::from_int(108)).unwrap()
    }

    fn fxf_model() -> Arc<CohomModel> {
        CohomModel::fano_square(&EngineConfig::default(), &Scalar::from_int(108)).unwrap()
    }

    #[test]
    fn fano_integrals() {
        let m = fano_model();
        let g = CohomClass::letter(&m, "g");
        let b = CohomClass::letter(&m, "b");
        assert_eq!(g.pow(4).integrate().unwrap(), Scalar::from_int(108));
        assert_eq!(g.pow(2).mul(&b).integrate().unwrap(), Scalar::from_int(150));
        assert_eq!(b.pow(2).integrate().unwrap(), Scalar::from_int(575));
    }

    #[test]
    fn startup_cross_check_rejects_bad_config() {
        let cfg = EngineConfig {
            fujiki_constant: Scalar::from_int(2),
            ..EngineConfig::default()
        };
        assert!(CohomModel::fano(&cfg, &Scalar::from_int(108)).is_err());
        let cfg2 = EngineConfig {
            q_g: Scalar::from_int(5),
            ..EngineConfig::default()
        };
        assert!(CohomModel::fano(&cfg2, &Scalar::from_int(108)).is_err());
    }

    #[test]
    fn fano_gram_ranks() {
        let m = fano_model();
        let ranks: Vec<usize> = (0..=4).map(|d| m.gram_rank(d)).collect();
        assert_eq!(ranks, vec![1, 1, 2, 1, 1]);
    }

    #[test]
    fn gb_collapses_onto_g3() {
        // degree 3: g*b = (25/18) g^3 as classes
        let m = fano_model();
        let g = CohomClass::letter(&m, "g");
        let b = CohomClass::letter(&m, "b");
        let gb = g.mul(&b);
        let g3 = g.pow(3).scale(&Scalar::frac(25, 18));
        assert!(gb.eq_class(&g3));
        assert!(!gb.is_zero_class());
    }

    #[test]
    fn fxf_gram_ranks_match_hodge_table() {
        let m = fxf_model();
        let ranks: Vec<usize> = (0..=8).map(|d| m.gram_rank(d)).collect();
        assert_eq!(ranks, vec![1, 2, 6, 8, 12, 8, 6, 2, 1]);
    }

    #[test]
    fn kuenneth_integrals_on_the_square() {
        let m = fxf_model();
        let g1 = CohomClass::letter(&m, "g1");
        let g2 = CohomClass::letter(&m, "g2");
        let b1 = CohomClass::letter(&m, "b1");
        let b2 = CohomClass::letter(&m, "b2");
        let bb = CohomClass::letter(&m, "B");
        assert_eq!(
            g1.pow(4).mul(&g2.pow(4)).integrate().unwrap(),
            Scalar::from_int(11664)
        );
        // hand-checked contraction values
        assert_eq!(
            g1.pow(3).mul(&g2.pow(3)).mul(&bb).integrate().unwrap(),
            Scalar::from_int(1944)
        );
        assert_eq!(
            g1.pow(3).mul(&g2).mul(&b2).mul(&bb).integrate().unwrap(),
            Scalar::from_int(2700)
        );
        assert_eq!(
            g1.mul(&b1).mul(&g2).mul(&b2).mul(&bb).integrate().unwrap(),
            Scalar::from_int(3750)
        );
        assert_eq!(
            g1.pow(2)
                .mul(&g2.pow(2))
                .mul(&bb.pow(2))
                .integrate()
                .unwrap(),
            Scalar::from_int(1116)
        );
        assert_eq!(
            g1.mul(&g2).mul(&bb.pow(3)).integrate().unwrap(),
            Scalar::from_int(450)
        );
        assert_eq!(bb.pow(4).integrate().unwrap(), Scalar::from_int(1725));
        assert_eq!(
            b1.mul(&b2).mul(&bb.pow(2)).integrate().unwrap(),
            Scalar::from_int(14375)
        );
    }

    #[test]
    fn transpose_is_an_isometry() {
        let m = fxf_model();
        let g1 = CohomClass::letter(&m, "g1");
        let b2 = CohomClass::letter(&m, "b2");
        let bb = CohomClass::letter(&m, "B");
        let x = g1.pow(2).mul(&b2).add(&bb.mul(&g1).mul(&CohomClass::letter(&m, "g2")));
        let y = bb.pow(2);
        assert_eq!(x.transpose().pair(&y.transpose()), x.pair(&y));
    }

    #[test]
    fn k3_square_diagonal_and_gram() {
        let cfg = EngineConfig::default(); // quartic, d = 4
        let m = CohomModel::k3_power(2, &cfg);
        assert_eq!(m.gram_rank(2), 4);
        let diag = diagonal_class(&m).unwrap();
        // Δ = o1 + o2 + (1/4) h1 h2 + K12 as a class
        let h1 = CohomClass::letter(&m, "h1");
        let h2 = CohomClass::letter(&m, "h2");
        let o1 = CohomClass::letter(&m, "o1");
        let o2 = CohomClass::letter(&m, "o2");
        let k = CohomClass::letter(&m, "K12");
        let expected = o1
            .add(&o2)
            .add(&h1.mul(&h2).scale(&Scalar::frac(1, 4)))
            .add(&k);
        assert!(diag.eq_class(&expected));
        // ∫ Δ (h x h) = d
        assert_eq!(
            diag.mul(&h1).mul(&h2).integrate().unwrap(),
            Scalar::from_int(4)
        );
        // ∫ Δ^2 = χ(S) = 24
        assert_eq!(diag.pow(2).integrate().unwrap(), Scalar::from_int(24));
    }

    #[test]
    fn fxf_diagonal_defining_property() {
        let m = fxf_model();
        let diag = diagonal_class(&m).unwrap();
        let g1 = CohomClass::letter(&m, "g1");
        let g2 = CohomClass::letter(&m, "g2");
        assert_eq!(
            diag.mul(&g1.pow(2)).mul(&g2.pow(2)).integrate().unwrap(),
            Scalar::from_int(108)
        );
        // Lefschetz fixed point: ∫ Δ^2 = χ(F) = 324
        assert_eq!(diag.pow(2).integrate().unwrap(), Scalar::from_int(324));
    }

    #[test]
    fn derive_relation_solves_and_reports_kernel() {
        let m = fano_model();
        let g = CohomClass::letter(&m, "g");
        let b = CohomClass::letter(&m, "b");
        let gb = g.mul(&b);
        let (sol, kernel) = derive_relation(&gb, &[g.pow(3)]).unwrap();
        assert_eq!(sol, vec![Scalar::frac(25, 18)]);
        assert!(kernel.is_empty());
        let (_, kernel2) = derive_relation(&gb, &[g.pow(3), gb.clone()]).unwrap();
        assert_eq!(kernel2.len(), 1);
        // no solution outside the span: b is not a multiple of g^2
        assert!(derive_relation(&b, &[g.pow(2)]).is_none());
    }
}
