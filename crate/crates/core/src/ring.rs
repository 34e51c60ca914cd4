//! Finitely presented graded commutative algebras over the rationals.
//!
//! A [`RingPresentation`] is a list of weighted generators, a finite list of
//! homogeneous relations, a top degree above which everything vanishes, and
//! an optional integration normalizer pinning the top-degree functional.
//!
//! Degree-`d` normal forms are computed by closing the relations degree-wise:
//! every product `relation * monomial` of total degree `d` is a row of a
//! linear span, and the quotient is read off from an exact row echelon form
//! of that span. Degrees are bounded (8 for the fourfold square, `2r` for
//! K3 powers), so this linear-algebra closure is complete and sidesteps any
//! critical-pair analysis.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

pub type Exponent = u8;

/// A commutative monomial: one exponent per generator of the presentation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Box<[Exponent]>);

impl Monomial {
    pub fn unit(width: usize) -> Self {
        Monomial(vec![0; width].into_boxed_slice())
    }

    pub fn from_pairs(width: usize, pairs: &[(usize, Exponent)]) -> Self {
        let mut e = vec![0; width];
        for &(i, k) in pairs {
            e[i] += k;
        }
        Monomial(e.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn exponent(&self, gen: usize) -> Exponent {
        self.0[gen]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Pivot weights steering which monomials get rewritten by the echelon:
    /// higher `(w1, w2)` monomials are preferred as pivots.
    pub pivot_class: (u32, u32),
}

/// A homogeneous polynomial in the generators, before it is tied to a ring.
#[derive(Clone, Debug)]
pub struct RawPoly {
    pub degree: u32,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl RawPoly {
    pub fn new(degree: u32) -> Self {
        RawPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            // remove exact cancellations eagerly
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("degree {0} out of range (top degree {1})")]
    DegreeOutOfRange(u32, u32),
    #[error("presentation `{0}` has no integral normalizer")]
    NoNormalizer(String),
    #[error("top-degree quotient of `{0}` is not one-dimensional")]
    TopNotOneDimensional(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

pub struct RingPresentation {
    id: u64,
    name: String,
    generators: Vec<Generator>,
    relations: Vec<RawPoly>,
    top_degree: u32,
    normalizer: Option<(Monomial, Scalar)>,
    preferred_basis: HashMap<u32, Vec<Monomial>>,
    monomial_cache: RwLock<HashMap<u32, Arc<MonomialTable>>>,
    echelon_cache: RwLock<HashMap<u32, Arc<Echelon>>>,
}

pub type Ring = Arc<RingPresentation>;

struct MonomialTable {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

/// Sparse row echelon of the degree-`d` relation span, in pivot-priority
/// coordinates. Rows are sorted by priority rank with a leading coefficient
/// of one; the quotient basis is the set of non-pivot monomials.
struct Echelon {
    /// priority rank -> display index
    display_of: Vec<usize>,
    /// display index -> priority rank
    rank_of: Vec<u32>,
    rows: HashMap<u32, Vec<(u32, Scalar)>>,
    rank: usize,
    /// display indices of the quotient basis monomials, display order
    basis: Vec<usize>,
}

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

pub struct RingBuilder {
    name: String,
    generators: Vec<Generator>,
    relations: Vec<RawPoly>,
    top_degree: u32,
    normalizer: Option<(Monomial, Scalar)>,
    preferred_basis: HashMap<u32, Vec<Monomial>>,
}

impl RingBuilder {
    pub fn new(name: &str, top_degree: u32) -> Self {
        RingBuilder {
            name: name.to_string(),
            generators: Vec::new(),
            relations: Vec::new(),
            top_degree,
            normalizer: None,
            preferred_basis: HashMap::new(),
        }
    }

    pub fn gen(&mut self, name: &str, degree: u32) -> usize {
        self.gen_classed(name, degree, (0, 0))
    }

    pub fn gen_classed(&mut self, name: &str, degree: u32, pivot_class: (u32, u32)) -> usize {
        assert!(degree >= 1, "generator degree must be positive");
        self.generators.push(Generator {
            name: name.to_string(),
            degree,
            pivot_class,
        });
        self.generators.len() - 1
    }

    pub fn width(&self) -> usize {
        self.generators.len()
    }

    pub fn relation(&mut self, poly: RawPoly) {
        assert!(!poly.terms.is_empty(), "empty relation");
        let w = self.generators.len();
        for m in poly.terms.keys() {
            assert_eq!(m.exponents().len(), w, "relation width mismatch");
            let d: u32 = m
                .exponents()
                .iter()
                .zip(&self.generators)
                .map(|(&e, g)| e as u32 * g.degree)
                .sum();
            assert_eq!(d, poly.degree, "relation not homogeneous");
        }
        self.relations.push(poly);
    }

    pub fn normalizer(&mut self, m: Monomial, value: Scalar) {
        self.normalizer = Some((m, value));
    }

    pub fn preferred_basis(&mut self, degree: u32, monomials: Vec<Monomial>) {
        self.preferred_basis.insert(degree, monomials);
    }

    pub fn build(self) -> Ring {
        let max_gen_degree = self.generators.iter().map(|g| g.degree).max().unwrap_or(0);
        assert!(
            self.top_degree >= max_gen_degree,
            "top degree below a generator degree"
        );
        Arc::new(RingPresentation {
            id: NEXT_RING_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: self.name,
            generators: self.generators,
            relations: self.relations,
            top_degree: self.top_degree,
            normalizer: self.normalizer,
            preferred_basis: self.preferred_basis,
            monomial_cache: RwLock::new(HashMap::new()),
            echelon_cache: RwLock::new(HashMap::new()),
        })
    }
}

impl RingPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn width(&self) -> usize {
        self.generators.len()
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn gen_index(&self, name: &str) -> Result<usize, RingError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.generators)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum()
    }

    /// All exponent vectors of weighted degree `d`, in descending graded-lex
    /// order with respect to the declared generator order.
    pub fn monomials(&self, d: u32) -> Vec<Monomial> {
        self.monomial_table(d).monomials.clone()
    }

    fn monomial_table(&self, d: u32) -> Arc<MonomialTable> {
        if let Some(t) = self.monomial_cache.read().unwrap().get(&d) {
            return Arc::clone(t);
        }
        let mut out: Vec<Monomial> = Vec::new();
        let mut current = vec![0 as Exponent; self.width()];
        enumerate_monomials(&self.generators, 0, d, &mut current, &mut out);
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
        Arc::clone(
            self.monomial_cache
                .read()
                .unwrap()
                .get(&d)
                .expect("just inserted"),
        )
    }

    pub fn relations(self: &Arc<Self>) -> Vec<CycleElement> {
        self.relations
            .iter()
            .map(|r| CycleElement {
                ring: Arc::clone(self),
                degree: r.degree,
                terms: r.terms.clone(),
            })
            .collect()
    }

    /// The degree-`d` span of `relation * monomial` products, one row per
    /// product, columns indexed by `monomials(d)`. Intended for inspection
    /// and small presentations; dimension queries go through the cached
    /// sparse echelon instead.
    pub fn relation_span(&self, d: u32) -> DenseMatrix {
        let table = self.monomial_table(d);
        let cols = table.monomials.len();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        self.for_each_relation_row(d, |row_terms| {
            let mut row = vec![Scalar::zero(); cols];
            for (m, c) in row_terms {
                let idx = *table.index.get(&m).expect("monomial in table");
                row[idx] += c;
            }
            rows.push(row);
        });
        if rows.is_empty() {
            return DenseMatrix::zero(0, cols);
        }
        DenseMatrix::from_rows(rows)
    }

    fn for_each_relation_row(&self, d: u32, mut f: impl FnMut(Vec<(Monomial, Scalar)>)) {
        for rel in &self.relations {
            if rel.degree > d {
                continue;
            }
            let multipliers = self.monomial_table(d - rel.degree);
            for mult in &multipliers.monomials {
                let row: Vec<(Monomial, Scalar)> = rel
                    .terms
                    .iter()
                    .map(|(m, c)| (m.mul(mult), c.clone()))
                    .collect();
                f(row);
            }
        }
    }

    fn echelon(&self, d: u32) -> Arc<Echelon> {
        if let Some(e) = self.echelon_cache.read().unwrap().get(&d) {
            return Arc::clone(e);
        }
        let table = self.monomial_table(d);
        let n = table.monomials.len();

        // Pivot priority: non-preferred monomials first (ordered by pivot
        // weights, heaviest first), preferred-basis monomials last so the
        // echelon leaves them as the quotient basis whenever possible.
        let preferred: HashMap<&Monomial, usize> = self
            .preferred_basis
            .get(&d)
            .map(|v| v.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .unwrap_or_default();
        let mut order: Vec<usize> = (0..n).collect();
        let weight = |i: usize| -> (u32, u32) {
            let m = &table.monomials[i];
            let mut w = (0u32, 0u32);
            for (e, g) in m.exponents().iter().zip(&self.generators) {
                w.0 += *e as u32 * g.pivot_class.0;
                w.1 += *e as u32 * g.pivot_class.1;
            }
            w
        };
        order.sort_by_key(|&i| {
            let pref = preferred.get(&table.monomials[i]).copied();
            match pref {
                None => {
                    let (w1, w2) = weight(i);
                    (0u8, std::cmp::Reverse(w1), std::cmp::Reverse(w2), i)
                }
                Some(p) => (1u8, std::cmp::Reverse(0), std::cmp::Reverse(0), p),
            }
        });
        let mut rank_of = vec![0u32; n];
        for (rank, &idx) in order.iter().enumerate() {
            rank_of[idx] = rank as u32;
        }

        let mut rows: HashMap<u32, Vec<(u32, Scalar)>> = HashMap::new();
        self.for_each_relation_row(d, |row_terms| {
            let mut row: Vec<(u32, Scalar)> = Vec::with_capacity(row_terms.len());
            for (m, c) in row_terms {
                let idx = *table.index.get(&m).expect("monomial in table");
                row.push((rank_of[idx], c));
            }
            row.sort_by_key(|&(r, _)| r);
            merge_duplicates(&mut row);
            reduce_insert(&mut rows, row);
        });

        let rank = rows.len();
        let basis: Vec<usize> = (0..n)
            .filter(|&i| !rows.contains_key(&rank_of[i]))
            .collect();
        let echelon = Arc::new(Echelon {
            display_of: order,
            rank_of,
            rows,
            rank,
            basis,
        });
        self.echelon_cache
            .write()
            .unwrap()
            .entry(d)
            .or_insert_with(|| Arc::clone(&echelon));
        Arc::clone(
            self.echelon_cache
                .read()
                .unwrap()
                .get(&d)
                .expect("just inserted"),
        )
    }

    /// Dimension of the degree-`d` graded piece of the quotient.
    pub fn graded_dimension(&self, d: u32) -> usize {
        if d > self.top_degree {
            return 0;
        }
        let table = self.monomial_table(d);
        table.monomials.len() - self.echelon(d).rank
    }

    /// The monomials representing the degree-`d` quotient basis. When a
    /// preferred basis is declared for the degree, its members are reported
    /// first, in their published order.
    pub fn basis(&self, d: u32) -> Vec<Monomial> {
        if d > self.top_degree {
            return Vec::new();
        }
        let table = self.monomial_table(d);
        let mut out: Vec<Monomial> = self
            .echelon(d)
            .basis
            .iter()
            .map(|&i| table.monomials[i].clone())
            .collect();
        if let Some(pref) = self.preferred_basis.get(&d) {
            let position: HashMap<&Monomial, usize> =
                pref.iter().enumerate().map(|(i, m)| (m, i)).collect();
            out.sort_by_key(|m| match position.get(m) {
                Some(&i) => (0usize, i),
                None => (1, table.index[m]),
            });
        }
        out
    }

    pub fn normalizer_data(&self) -> Option<(&Monomial, &Scalar)> {
        self.normalizer.as_ref().map(|(m, s)| (m, s))
    }
}

fn enumerate_monomials(
    gens: &[Generator],
    gen_idx: usize,
    remaining: u32,
    current: &mut Vec<Exponent>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial(current.clone().into_boxed_slice()));
        return;
    }
    if gen_idx == gens.len() {
        return;
    }
    let gd = gens[gen_idx].degree;
    let max_e = remaining / gd;
    for e in 0..=max_e {
        current[gen_idx] = e as Exponent;
        enumerate_monomials(gens, gen_idx + 1, remaining - e * gd, current, out);
    }
    current[gen_idx] = 0;
}

fn merge_duplicates(row: &mut Vec<(u32, Scalar)>) {
    let mut out: Vec<(u32, Scalar)> = Vec::with_capacity(row.len());
    for (r, c) in row.drain(..) {
        match out.last_mut() {
            Some((lr, lc)) if *lr == r => *lc += c,
            _ => out.push((r, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    *row = out;
}

/// `a -= coef * b`, both sorted by rank ascending.
fn row_axpy(a: &[(u32, Scalar)], coef: &Scalar, b: &[(u32, Scalar)]) -> Vec<(u32, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ra, ca)), Some((rb, cb))) => {
                if ra < rb {
                    out.push((*ra, ca.clone()));
                    i += 1;
                } else if rb < ra {
                    out.push((*rb, -(coef * cb)));
                    j += 1;
                } else {
                    let v = ca - &(coef * cb);
                    if !v.is_zero() {
                        out.push((*ra, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ra, ca)), None) => {
                out.push((*ra, ca.clone()));
                i += 1;
            }
            (None, Some((rb, cb))) => {
                out.push((*rb, -(coef * cb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn reduce_insert(rows: &mut HashMap<u32, Vec<(u32, Scalar)>>, mut row: Vec<(u32, Scalar)>) {
    loop {
        let Some((lead, coef)) = row.first().cloned() else {
            return;
        };
        match rows.get(&lead) {
            Some(pivot_row) => {
                row = row_axpy(&row, &coef, pivot_row);
            }
            None => {
                let inv = coef.recip();
                for (_, c) in row.iter_mut() {
                    *c = &*c * &inv;
                }
                rows.insert(lead, row);
                return;
            }
        }
    }
}

/// Reduces a vector (sorted by rank) modulo the echelon rows; the residual
/// is supported on non-pivot ranks only, hence canonical.
fn reduce_vector(
    rows: &HashMap<u32, Vec<(u32, Scalar)>>,
    mut v: Vec<(u32, Scalar)>,
) -> Vec<(u32, Scalar)> {
    let mut out: Vec<(u32, Scalar)> = Vec::new();
    loop {
        let Some((lead, coef)) = v.first().cloned() else {
            return out;
        };
        match rows.get(&lead) {
            Some(pivot_row) => {
                v = row_axpy(&v, &coef, pivot_row);
            }
            None => {
                out.push((lead, coef));
                v.remove(0);
            }
        }
    }
}

/// An exact-rational combination of generator monomials of a fixed degree.
#[derive(Clone)]
pub struct CycleElement {
    ring: Ring,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl CycleElement {
    pub fn zero(ring: &Ring, degree: u32) -> Self {
        CycleElement {
            ring: Arc::clone(ring),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(ring: &Ring, degree: u32, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(ring.monomial_degree(&m), degree, "term degree mismatch");
            if c.is_zero() {
                continue;
            }
            let e = map.entry(m).or_insert_with(Scalar::zero);
            *e += c;
        }
        map.retain(|_, c| !c.is_zero());
        CycleElement {
            ring: Arc::clone(ring),
            degree,
            terms: map,
        }
    }

    pub fn generator(ring: &Ring, gen: usize) -> Self {
        let m = Monomial::from_pairs(ring.width(), &[(gen, 1)]);
        let d = ring.generators()[gen].degree;
        Self::from_terms(ring, d, vec![(m, Scalar::one())])
    }

    pub fn monomial(ring: &Ring, pairs: &[(usize, Exponent)]) -> Self {
        let m = Monomial::from_pairs(ring.width(), pairs);
        let d = ring.monomial_degree(&m);
        Self::from_terms(ring, d, vec![(m, Scalar::one())])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn try_add(&self, other: &CycleElement) -> Result<CycleElement, RingError> {
        if self.ring.id != other.ring.id {
            return Err(RingError::PresentationMismatch);
        }
        if self.terms.is_empty() {
            return Ok(other.clone());
        }
        if other.terms.is_empty() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(RingError::DegreeMismatch(self.degree, other.degree));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *e += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(CycleElement {
            ring: Arc::clone(&self.ring),
            degree: self.degree,
            terms,
        })
    }

    pub fn try_mul(&self, other: &CycleElement) -> Result<CycleElement, RingError> {
        if self.ring.id != other.ring.id {
            return Err(RingError::PresentationMismatch);
        }
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let e = terms.entry(m).or_insert_with(Scalar::zero);
                *e += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(CycleElement {
            ring: Arc::clone(&self.ring),
            degree,
            terms,
        })
    }

    pub fn scale(&self, s: &Scalar) -> CycleElement {
        if s.is_zero() {
            return CycleElement::zero(&self.ring, self.degree);
        }
        CycleElement {
            ring: Arc::clone(&self.ring),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CycleElement {
        let mut acc = CycleElement::from_terms(
            &self.ring,
            0,
            vec![(Monomial::unit(self.ring.width()), Scalar::one())],
        );
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same ring");
        }
        acc
    }

    /// Canonical representative modulo the degree-wise relation span.
    /// Degrees above the top degree reduce to zero.
    pub fn normal_form(&self) -> CycleElement {
        if self.degree > self.ring.top_degree || self.terms.is_empty() {
            return CycleElement::zero(&self.ring, self.degree);
        }
        let table = self.ring.monomial_table(self.degree);
        let ech = self.ring.echelon(self.degree);
        let mut v: Vec<(u32, Scalar)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let idx = *table.index.get(m).expect("monomial in table");
                (ech.rank_of[idx], c.clone())
            })
            .collect();
        v.sort_by_key(|&(r, _)| r);
        let reduced = reduce_vector(&ech.rows, v);
        let terms = reduced
            .into_iter()
            .map(|(r, c)| (table.monomials[ech.display_of[r as usize]].clone(), c))
            .collect::<Vec<_>>();
        CycleElement::from_terms(&self.ring, self.degree, terms)
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().terms.is_empty()
    }

    pub fn eq_mod_relations(&self, other: &CycleElement) -> bool {
        match self.try_add(&other.scale(&Scalar::from_int(-1))) {
            Ok(diff) => diff.is_zero(),
            Err(_) => false,
        }
    }

    /// Exact integral of a top-degree element, using the presentation's
    /// integral normalizer.
    pub fn integrate(&self) -> Result<Scalar, RingError> {
        let ring = &self.ring;
        let (m0, value) = ring
            .normalizer_data()
            .ok_or_else(|| RingError::NoNormalizer(ring.name().to_string()))?;
        if self.degree != ring.top_degree() {
            return Err(RingError::DegreeMismatch(self.degree, ring.top_degree()));
        }
        let nf = self.normal_form();
        for m in nf.terms.keys() {
            if m != m0 {
                return Err(RingError::TopNotOneDimensional(ring.name().to_string()));
            }
        }
        Ok(&nf.coefficient(m0) * value)
    }

    /// Applies a permutation of the generators (exponent relabeling).
    /// The permutation must preserve generator degrees.
    pub fn permute_generators(&self, perm: &[usize]) -> CycleElement {
        let gens = self.ring.generators();
        for (i, &p) in perm.iter().enumerate() {
            debug_assert_eq!(gens[i].degree, gens[p].degree, "degree-changing permutation");
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0 as Exponent; perm.len()];
                for (i, &exp) in m.exponents().iter().enumerate() {
                    e[perm[i]] += exp;
                }
                (Monomial(e.into_boxed_slice()), c.clone())
            })
            .collect();
        CycleElement::from_terms(&self.ring, self.degree, terms)
    }

    /// Renders as e.g. `5/12*g^3 - g*c`. Zero renders as `0`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let table = self.ring.monomial_table(self.degree);
        let mut ordered: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| *table.index.get(*m).expect("monomial in table"));
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
            let mono = self.render_monomial(m);
            if mono.is_empty() {
                let _ = write!(out, "{mag}");
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{mag}*{mono}");
            }
        }
        out
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        let gens = self.ring.generators();
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(gens[i].name.clone()),
                _ => parts.push(format!("{}^{}", gens[i].name, e)),
            }
        }
        parts.join("*")
    }
}

impl std::fmt::Debug for CycleElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}; deg {}] {}", self.ring.name(), self.degree, self.render())
    }
}

impl std::ops::Add for &CycleElement {
    type Output = CycleElement;
    fn add(self, rhs: &CycleElement) -> CycleElement {
        self.try_add(rhs).expect("add")
    }
}

impl std::ops::Sub for &CycleElement {
    type Output = CycleElement;
    fn sub(self, rhs: &CycleElement) -> CycleElement {
        self.try_add(&rhs.scale(&Scalar::from_int(-1))).expect("sub")
    }
}

impl std::ops::Mul for &CycleElement {
    type Output = CycleElement;
    fn mul(self, rhs: &CycleElement) -> CycleElement {
        self.try_mul(rhs).expect("mul")
    }
}

/// A formal sum of homogeneous pieces; all graded-ring operations
/// distribute over the components.
#[derive(Clone)]
pub struct GradedElement {
    ring: Ring,
    parts: BTreeMap<u32, CycleElement>,
}

impl GradedElement {
    pub fn zero(ring: &Ring) -> Self {
        GradedElement {
            ring: Arc::clone(ring),
            parts: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        let unit = CycleElement::from_terms(
            ring,
            0,
            vec![(Monomial::unit(ring.width()), Scalar::one())],
        );
        let mut g = Self::zero(ring);
        g.set_part(unit);
        g
    }

    pub fn from_part(x: CycleElement) -> Self {
        let mut g = Self::zero(x.ring());
        g.set_part(x);
        g
    }

    pub fn set_part(&mut self, x: CycleElement) {
        if x.num_terms() > 0 {
            self.parts.insert(x.degree(), x);
        } else {
            self.parts.remove(&x.degree());
        }
    }

    pub fn part(&self, d: u32) -> CycleElement {
        self.parts
            .get(&d)
            .cloned()
            .unwrap_or_else(|| CycleElement::zero(&self.ring, d))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&u32, &CycleElement)> {
        self.parts.iter()
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        let mut parts = self.parts.clone();
        for (d, x) in &other.parts {
            let cur = parts
                .remove(d)
                .unwrap_or_else(|| CycleElement::zero(&self.ring, *d));
            let sum = cur.try_add(x).expect("graded add");
            if sum.num_terms() > 0 {
                parts.insert(*d, sum);
            }
        }
        GradedElement {
            ring: Arc::clone(&self.ring),
            parts,
        }
    }

    pub fn scale(&self, s: &Scalar) -> GradedElement {
        GradedElement {
            ring: Arc::clone(&self.ring),
            parts: self
                .parts
                .iter()
                .map(|(d, x)| (*d, x.scale(s)))
                .filter(|(_, x)| x.num_terms() > 0)
                .collect(),
        }
    }

    pub fn mul(&self, other: &GradedElement) -> GradedElement {
        let mut out = Self::zero(&self.ring);
        for (da, xa) in &self.parts {
            for (db, xb) in &other.parts {
                if da + db > self.ring.top_degree() {
                    continue;
                }
                let prod = xa.try_mul(xb).expect("graded mul");
                let cur = out.part(da + db);
                out.set_part(cur.try_add(&prod).expect("graded add"));
            }
        }
        out
    }

    /// Multiplicative inverse of a series with unit constant term,
    /// truncated at the ring's top degree.
    pub fn invert_unit_series(&self) -> GradedElement {
        let c0 = self.part(0);
        assert!(
            c0.num_terms() == 1 && c0.coefficient(&Monomial::unit(self.ring.width())).is_one(),
            "series must have constant term 1"
        );
        let top = self.ring.top_degree();
        let mut inv = GradedElement::one(&self.ring);
        // tail = self - 1; inv = sum_k (-tail)^k
        let mut tail = self.clone();
        tail.parts.remove(&0);
        let mut power = GradedElement::one(&self.ring);
        for _ in 0..top {
            power = power.mul(&tail).scale(&Scalar::from_int(-1));
            if power.parts.is_empty() {
                break;
            }
            inv = inv.add(&power);
        }
        inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Truncated polynomial ring Q[x]/(x^4 relations none), top degree 3.
    fn poly_ring() -> Ring {
        let mut b = RingBuilder::new("Q[x]", 3);
        b.gen("x", 1);
        b.build()
    }

    #[test]
    fn monomial_enumeration_is_graded_lex() {
        let mut b = RingBuilder::new("test", 4);
        let g = b.gen("g", 1);
        let c = b.gen("c", 2);
        let ring = b.build();
        let ms = ring.monomials(2);
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0], Monomial::from_pairs(2, &[(g, 2)]));
        assert_eq!(ms[1], Monomial::from_pairs(2, &[(c, 1)]));
        assert!(ring.monomials(0).len() == 1 && ring.monomials(0)[0].is_unit());
    }

    #[test]
    fn empty_relation_span_at_degree_zero() {
        let ring = poly_ring();
        let span = ring.relation_span(0);
        assert_eq!(span.rows(), 0);
        assert_eq!(ring.graded_dimension(0), 1);
    }

    #[test]
    fn normal_form_is_linear_projection() {
        // Q[g, c]/(12gc - 5g^3), top 4.
        let mut b = RingBuilder::new("fano-ish", 4);
        let g = b.gen("g", 1);
        let c = b.gen_classed("c", 2, (1, 0));
        let mut rel = RawPoly::new(3);
        rel.add_term(Monomial::from_pairs(2, &[(g, 1), (c, 1)]), Scalar::from_int(12));
        rel.add_term(Monomial::from_pairs(2, &[(g, 3)]), Scalar::from_int(-5));
        b.relation(rel);
        let ring = b.build();

        let gc = CycleElement::monomial(&ring, &[(g, 1), (c, 1)]);
        let g3 = CycleElement::monomial(&ring, &[(g, 3)]);
        let rel_elem = &gc.scale(&Scalar::from_int(12)) - &g3.scale(&Scalar::from_int(5));
        assert!(rel_elem.is_zero());
        // gc reduces onto the g^3 basis monomial
        let nf = gc.normal_form();
        assert_eq!(nf.render(), "5/12*g^3");

        // linearity: nf(a*x + b*y) = a*nf(x) + b*nf(y)
        let a = Scalar::frac(2, 7);
        let bs = Scalar::frac(-3, 5);
        let lhs = (&gc.scale(&a) + &g3.scale(&bs)).normal_form();
        let rhs = &gc.normal_form().scale(&a) + &g3.normal_form().scale(&bs);
        assert!(lhs.eq_mod_relations(&rhs));
    }

    #[test]
    fn degree_above_top_is_zero() {
        let ring = poly_ring();
        let x = CycleElement::monomial(&ring, &[(0, 1)]);
        let x4 = x.pow(4);
        assert_eq!(x4.degree(), 4);
        assert!(x4.is_zero());
        assert_eq!(ring.graded_dimension(4), 0);
    }

    #[test]
    fn quotient_consistency_and_dimension_formula() {
        let mut b = RingBuilder::new("fano", 4);
        let g = b.gen("g", 1);
        let c = b.gen_classed("c", 2, (1, 0));
        let w = 2;
        let mut r1 = RawPoly::new(3);
        r1.add_term(Monomial::from_pairs(w, &[(g, 1), (c, 1)]), Scalar::from_int(12));
        r1.add_term(Monomial::from_pairs(w, &[(g, 3)]), Scalar::from_int(-5));
        b.relation(r1);
        let mut r2 = RawPoly::new(4);
        r2.add_term(Monomial::from_pairs(w, &[(c, 2)]), Scalar::from_int(4));
        r2.add_term(Monomial::from_pairs(w, &[(g, 4)]), Scalar::from_int(-1));
        b.relation(r2);
        let ring = b.build();

        for d in 0..=4u32 {
            let span = ring.relation_span(d);
            assert_eq!(
                ring.graded_dimension(d),
                ring.monomials(d).len() - span.rank(),
                "dimension formula at degree {d}"
            );
            // every relation*monomial product normalizes to zero
            for rel in ring.relations() {
                if rel.degree() > d {
                    continue;
                }
                for m in ring.monomials(d - rel.degree()) {
                    let mult = CycleElement::from_terms(
                        &ring,
                        d - rel.degree(),
                        vec![(m, Scalar::one())],
                    );
                    assert!(rel.try_mul(&mult).unwrap().is_zero());
                }
            }
        }
        assert_eq!(
            (0..=4).map(|d| ring.graded_dimension(d)).collect::<Vec<_>>(),
            vec![1, 1, 2, 1, 1]
        );
    }

    #[test]
    fn presentation_mismatch_is_an_error() {
        let r1 = poly_ring();
        let r2 = poly_ring();
        let x = CycleElement::monomial(&r1, &[(0, 1)]);
        let y = CycleElement::monomial(&r2, &[(0, 1)]);
        assert!(matches!(
            x.try_add(&y),
            Err(RingError::PresentationMismatch)
        ));
    }

    #[test]
    fn unit_series_inversion() {
        // (1 + x)^-1 = 1 - x + x^2 - x^3 in Q[x] truncated at 3
        let ring = poly_ring();
        let x = CycleElement::monomial(&ring, &[(0, 1)]);
        let mut s = GradedElement::one(&ring);
        s.set_part(x.clone());
        let inv = s.invert_unit_series();
        assert_eq!(inv.part(1).render(), "-x");
        assert_eq!(inv.part(2).render(), "x^2");
        assert_eq!(inv.part(3).render(), "-x^3");
        let prod = s.mul(&inv);
        assert!(prod.part(1).is_zero() && prod.part(2).is_zero() && prod.part(3).is_zero());
    }
}
