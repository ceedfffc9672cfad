//! Machine checks of the invariance and independence claims: symbolic
//! invariance under group generators as identities in t, Jacobian rank
//! certificates at random integer points with exact arithmetic, and a
//! brute-force transcendence-degree estimate for tiny cases.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::action::{act_on_polynomial, GroupGenerator};
use crate::error::CoreError;
use crate::poly::{Polynomial, VariableId};
use crate::rng::SplitMix64;
use crate::roots::{prec_maximal_in_s, Composition, GeneratorSet, Root};

/// Which group the generators are drawn from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupTag {
    /// Full unitriangular group: all positive roots.
    FullUnitriangular,
    /// Unipotent radical: nilradical roots.
    UnipotentRadical,
    /// Maximal unipotent subgroup of the Levi factor: reductive roots.
    LeviUnipotent,
}

impl GroupTag {
    pub fn label(&self) -> &'static str {
        match self {
            GroupTag::FullUnitriangular => "N",
            GroupTag::UnipotentRadical => "U",
            GroupTag::LeviUnipotent => "U_L",
        }
    }

    pub fn generator_roots(&self, comp: &Composition) -> BTreeSet<Root> {
        match self {
            GroupTag::FullUnitriangular => comp.positive_roots(),
            GroupTag::UnipotentRadical => comp.nilradical_roots(),
            GroupTag::LeviUnipotent => comp.reductive_roots(),
        }
    }
}

/// Outcome of a symbolic invariance check: the generators whose action
/// changes the polynomial, with the nonzero residuals.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub label: String,
    pub group: GroupTag,
    pub failures: Vec<(Root, Polynomial)>,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Act with every one-parameter generator of the group (symbolic t) and
/// record the residuals acted(f) - f that are not identically zero.
pub fn check_invariance(
    gens: &GeneratorSet,
    f: &Polynomial,
    group: GroupTag,
    label: &str,
) -> InvarianceReport {
    let comp = gens.composition();
    let mut failures = Vec::new();
    for r in group.generator_roots(comp) {
        let g = GroupGenerator::symbolic(r.i, r.j);
        let acted = act_on_polynomial(comp, f, &g)
            .expect("unitriangular generators preserve the nilradical");
        let residual = &acted - f;
        if !residual.is_zero() {
            failures.push((r, residual));
        }
    }
    InvarianceReport {
        label: label.to_string(),
        group,
        failures,
    }
}

/// A rank certificate: a full-rank exact Jacobian evaluation proves
/// algebraic independence; anything less is inconclusive.
#[derive(Clone, Debug)]
pub struct IndependenceCertificate {
    pub labels: Vec<String>,
    pub rank: usize,
    pub expected: usize,
    pub trials_used: u32,
    pub point: BTreeMap<VariableId, BigRational>,
}

impl IndependenceCertificate {
    pub fn certified(&self) -> bool {
        self.rank == self.expected
    }
}

/// Evaluate the Jacobian of the polynomials at random nonzero integer
/// points from a box that doubles each trial, and compute its exact rank.
/// Stops at the first full-rank point.
pub fn check_independence(
    polys: &[(String, Polynomial)],
    trials: u32,
    seed: u64,
) -> IndependenceCertificate {
    assert!(!polys.is_empty(), "need at least one polynomial");
    let vars: Vec<VariableId> = polys
        .iter()
        .flat_map(|(_, p)| p.support())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let jacobian: Vec<Vec<Polynomial>> = polys
        .iter()
        .map(|(_, p)| vars.iter().map(|&v| p.differentiate(v)).collect())
        .collect();

    let mut rng = SplitMix64::new(seed);
    let mut best_rank = 0;
    let mut best_point = BTreeMap::new();
    let mut bound = 4i64;
    let mut used = 0;
    for _ in 0..trials.max(1) {
        used += 1;
        let point: BTreeMap<VariableId, BigRational> = vars
            .iter()
            .map(|&v| {
                (
                    v,
                    BigRational::from_integer(BigInt::from(rng.nonzero_int(bound))),
                )
            })
            .collect();
        let rows: Vec<Vec<BigRational>> = jacobian
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.evaluate(&point).expect("point covers support"))
                    .collect()
            })
            .collect();
        let rank = exact_rank(rows);
        if rank > best_rank {
            best_rank = rank;
            best_point = point;
        }
        if best_rank == polys.len() {
            break;
        }
        bound *= 2;
    }
    IndependenceCertificate {
        labels: polys.iter().map(|(l, _)| l.clone()).collect(),
        rank: best_rank,
        expected: polys.len(),
        trials_used: used,
        point: best_point,
    }
}

/// Exact rank by Gaussian elimination over the rationals.
pub fn exact_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let pivot_val = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_val;
            for c in col..cols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Independence of the extended-base family restricted to its slice,
/// checked in the slice coordinates.
pub fn check_restriction_independence(
    gens: &GeneratorSet,
    trials: u32,
    seed: u64,
) -> IndependenceCertificate {
    let slice = gens.slice_extended();
    let mut polys: Vec<(String, Polynomial)> = Vec::new();
    for (r, p) in gens.base_minors() {
        polys.push((format!("M_{r}|Y"), slice.restrict(&p)));
    }
    for (r, p) in gens.pair_invariants() {
        polys.push((format!("L_{r}|Y"), slice.restrict(&p)));
    }
    check_independence(&polys, trials, seed)
}

/// Generic rank of the span of gradients of all monomials in the broad
/// generators up to the degree bound: a brute-force estimate of the
/// transcendence degree of the invariant ring, for tiny dimensions.
pub fn invariant_ring_dimension_estimate(
    gens: &GeneratorSet,
    degree_bound: u32,
    point_count: u32,
    seed: u64,
) -> usize {
    assert!(gens.composition().n() <= 5, "brute-force oracle is for n <= 5");
    let broad: Vec<Polynomial> = gens
        .broad_invariants()
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    if broad.is_empty() {
        return 0;
    }
    // all products of broad generators with total degree in 1..=bound
    let mut monomials: Vec<Polynomial> = Vec::new();
    let mut stack: Vec<(usize, u32, Polynomial)> = vec![(0, 0, Polynomial::one())];
    while let Some((idx, deg, poly)) = stack.pop() {
        if deg > 0 {
            monomials.push(poly.clone());
        }
        for next in idx..broad.len() {
            if deg < degree_bound {
                stack.push((next, deg + 1, &poly * &broad[next]));
            }
        }
    }

    let vars: Vec<VariableId> = gens
        .nilradical()
        .iter()
        .map(|&r| VariableId::Matrix(r))
        .collect();
    let gradients: Vec<Vec<Polynomial>> = monomials
        .iter()
        .map(|p| vars.iter().map(|&v| p.differentiate(v)).collect())
        .collect();

    let mut rng = SplitMix64::new(seed);
    let mut best = 0;
    for _ in 0..point_count.max(1) {
        let point: BTreeMap<VariableId, BigRational> = vars
            .iter()
            .map(|&v| {
                (
                    v,
                    BigRational::from_integer(BigInt::from(rng.nonzero_int(8))),
                )
            })
            .collect();
        let rows: Vec<Vec<BigRational>> = gradients
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.evaluate(&point).expect("point covers all variables"))
                    .collect()
            })
            .collect();
        best = best.max(exact_rank(rows));
        if best == vars.len() {
            break;
        }
    }
    best
}

/// All compositions of n, in binary-cut order.
pub fn compositions_of(n: usize) -> Vec<Vec<usize>> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for mask in 0..(1u64 << (n - 1)) {
        let mut sizes = Vec::new();
        let mut run = 1;
        for bit in 0..(n - 1) {
            if mask & (1 << bit) != 0 {
                sizes.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        sizes.push(run);
        out.push(sizes);
    }
    out
}

/// All compositions of every n in 1..=n_max.
pub fn compositions_up_to(n_max: usize) -> Vec<Vec<usize>> {
    (1..=n_max).flat_map(compositions_of).collect()
}

/// One invariance failure in a sweep.
#[derive(Clone, Debug)]
pub struct InvarianceFailure {
    pub composition: Vec<usize>,
    pub label: String,
    pub group: GroupTag,
    pub generator: Root,
}

/// Sweep every composition up to n_max: base minors and pair invariants
/// must be invariant under the full unitriangular group, broad generators
/// under the unipotent radical. Returns all failures (none expected).
pub fn sweep_invariance(n_max: usize) -> (usize, Vec<InvarianceFailure>) {
    let mut failures = Vec::new();
    let comps = compositions_up_to(n_max);
    let checked = comps.len();
    for sizes in comps {
        let gens = GeneratorSet::from_sizes(sizes.clone()).expect("valid sizes");
        let mut tasks: Vec<(String, Polynomial, GroupTag)> = Vec::new();
        for (r, p) in gens.base_minors() {
            tasks.push((format!("M_{r}"), p, GroupTag::FullUnitriangular));
        }
        for (r, p) in gens.pair_invariants() {
            tasks.push((format!("L_{r}"), p, GroupTag::FullUnitriangular));
        }
        for (r, p) in gens.broad_invariants() {
            tasks.push((format!("N_{r}"), p, GroupTag::UnipotentRadical));
        }
        for (label, poly, group) in tasks {
            let report = check_invariance(&gens, &poly, group, &label);
            for (generator, _) in report.failures {
                failures.push(InvarianceFailure {
                    composition: sizes.clone(),
                    label: label.clone(),
                    group,
                    generator,
                });
            }
        }
    }
    (checked, failures)
}

/// One independence certificate in a sweep.
#[derive(Clone, Debug)]
pub struct IndependenceRecord {
    pub composition: Vec<usize>,
    pub family: &'static str,
    pub rank: usize,
    pub expected: usize,
    pub trials_used: u32,
}

impl IndependenceRecord {
    pub fn certified(&self) -> bool {
        self.rank == self.expected
    }
}

/// Jacobian rank certificates for both generator families over every
/// composition up to n_max.
pub fn sweep_independence(n_max: usize, trials: u32, seed: u64) -> Vec<IndependenceRecord> {
    let mut out = Vec::new();
    let mut rng = SplitMix64::new(seed);
    for sizes in compositions_up_to(n_max) {
        let gens = GeneratorSet::from_sizes(sizes.clone()).expect("valid sizes");
        let mut extended: Vec<(String, Polynomial)> = Vec::new();
        for (r, p) in gens.base_minors() {
            extended.push((format!("M_{r}"), p));
        }
        for (r, p) in gens.pair_invariants() {
            extended.push((format!("L_{r}"), p));
        }
        if !extended.is_empty() {
            let cert = check_independence(&extended, trials, rng.next_u64());
            out.push(IndependenceRecord {
                composition: sizes.clone(),
                family: "extended_base",
                rank: cert.rank,
                expected: cert.expected,
                trials_used: cert.trials_used,
            });
        }
        let broad: Vec<(String, Polynomial)> = gens
            .broad_invariants()
            .into_iter()
            .map(|(r, p)| (format!("N_{r}"), p))
            .collect();
        if !broad.is_empty() {
            let cert = check_independence(&broad, trials, rng.next_u64());
            out.push(IndependenceRecord {
                composition: sizes.clone(),
                family: "broad_base",
                rank: cert.rank,
                expected: cert.expected,
                trials_used: cert.trials_used,
            });
        }
    }
    out
}

/// First nilradical coordinate outside the broad base that fails
/// U-invariance, with a breaking generator. None when M = T (or when,
/// unexpectedly, every outside coordinate is invariant).
pub fn noninvariant_coordinate(gens: &GeneratorSet) -> Option<(Root, Root)> {
    for &gamma in gens.nilradical().difference(gens.broad()) {
        let f = Polynomial::var(VariableId::Matrix(gamma));
        let report = check_invariance(gens, &f, GroupTag::UnipotentRadical, "coordinate");
        if let Some((generator, _)) = report.failures.first() {
            return Some((gamma, *generator));
        }
    }
    None
}

/// The leading-coefficient identity on the broad-base slice: for every
/// broad root, the coefficient of its own coordinate in the restricted
/// generator equals the cofactor sign times the product of the restricted
/// generators over the maximal inside base roots.
pub fn check_leading_coefficients(gens: &GeneratorSet) -> Result<(), CoreError> {
    let slice = gens.slice_broad();
    for &xi in gens.broad() {
        let restricted = slice.restrict(&gens.broad_invariant(xi)?);
        let lead = restricted.coefficient_of(VariableId::Slice(xi), 1);
        let mut product = Polynomial::one();
        if gens.m_prime().contains(&xi) {
            for phi in prec_maximal_in_s(gens.base(), xi) {
                product = &product * &slice.restrict(&gens.broad_invariant(phi)?);
            }
            if gens.inside_base_roots(xi).len() % 2 == 1 {
                product = -&product;
            }
        }
        if lead != product {
            return Err(CoreError::NonMonomialDenominator {
                xi,
                actual: lead.to_string(),
            });
        }
    }
    Ok(())
}
