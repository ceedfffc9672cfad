//! Root-system combinatorics for a parabolic nilradical in type A.
//!
//! A positive root of gl(n) is a matrix cell (i, j) with i < j. A block
//! composition (r_1, ..., r_s) splits the index range into consecutive
//! blocks; the nilradical root set M consists of the cells strictly above
//! the block diagonal, and the reductive roots are the off-diagonal cells
//! inside diagonal blocks. On M we use the one-step relation
//! `a > b  iff  a - b is a positive root`, i.e. same row moving right or
//! same column moving up. The base S is extracted layer by layer from the
//! minimal elements; admissible pairs, the broad base T and the remoteness
//! statistic are all derived from S.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::error::CoreError;

/// A positive root (i, j), 1-based, i < j. Identified with a matrix cell.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(1 <= i && i < j, "root requires 1 <= i < j, got ({i},{j})");
        Root { i, j }
    }

    pub fn as_json(&self) -> Value {
        json!([self.i, self.j])
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// `a > b` in the one-step sense: a - b is itself a positive root. Roots
/// differing in both coordinates are incomparable.
pub fn greater(a: Root, b: Root) -> bool {
    (a.i == b.i && a.j > b.j) || (a.j == b.j && a.i < b.i)
}

pub fn comparable(a: Root, b: Root) -> bool {
    greater(a, b) || greater(b, a)
}

/// `a` strictly inside `b`: a.i > b.i and a.j < b.j. This is the relation
/// used both for the minor index sets and for the triangular solve order.
pub fn prec(a: Root, b: Root) -> bool {
    a.i > b.i && a.j < b.j
}

/// Block sizes (r_1, ..., r_s) with partial sums R_k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Composition {
    sizes: Vec<usize>,
    partial: Vec<usize>,
}

impl Composition {
    pub fn new(sizes: Vec<usize>) -> Result<Self, CoreError> {
        if sizes.is_empty() {
            return Err(CoreError::BadComposition("no blocks given".into()));
        }
        if sizes.iter().any(|&r| r == 0) {
            return Err(CoreError::BadComposition(
                "block sizes must be positive".into(),
            ));
        }
        let mut partial = Vec::with_capacity(sizes.len() + 1);
        partial.push(0);
        for &r in &sizes {
            partial.push(partial.last().unwrap() + r);
        }
        Ok(Composition { sizes, partial })
    }

    pub fn n(&self) -> usize {
        *self.partial.last().unwrap()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// R_k = r_1 + ... + r_k, with R_0 = 0.
    pub fn partial_sum(&self, k: usize) -> usize {
        self.partial[k]
    }

    /// 1-based block containing diagonal index `idx`.
    pub fn block_of(&self, idx: usize) -> usize {
        assert!(1 <= idx && idx <= self.n(), "index {idx} out of range");
        self.partial.partition_point(|&r| r < idx)
    }

    /// Roots of the nilradical: cells strictly above the block diagonal.
    pub fn nilradical_roots(&self) -> BTreeSet<Root> {
        let mut m = BTreeSet::new();
        for i in 1..=self.n() {
            for j in (i + 1)..=self.n() {
                if self.block_of(i) < self.block_of(j) {
                    m.insert(Root::new(i, j));
                }
            }
        }
        m
    }

    /// Positive roots of the reductive part: off-diagonal cells inside a
    /// diagonal block.
    pub fn reductive_roots(&self) -> BTreeSet<Root> {
        let mut d = BTreeSet::new();
        for i in 1..=self.n() {
            for j in (i + 1)..=self.n() {
                if self.block_of(i) == self.block_of(j) {
                    d.insert(Root::new(i, j));
                }
            }
        }
        d
    }

    /// All positive roots (i, j), i < j.
    pub fn positive_roots(&self) -> BTreeSet<Root> {
        let mut d = BTreeSet::new();
        for i in 1..=self.n() {
            for j in (i + 1)..=self.n() {
                d.insert(Root::new(i, j));
            }
        }
        d
    }

    /// Roots at block distance >= 2 (cells of the square of the nilradical).
    pub fn m_prime(&self) -> BTreeSet<Root> {
        self.nilradical_roots()
            .into_iter()
            .filter(|r| self.block_of(r.j) >= self.block_of(r.i) + 2)
            .collect()
    }

    pub fn as_json(&self) -> Value {
        Value::Array(self.sizes.iter().map(|&r| json!(r)).collect())
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Minimal elements of a root set: no member lies one step below.
pub fn minimal_elements(a: &BTreeSet<Root>) -> BTreeSet<Root> {
    a.iter()
        .copied()
        .filter(|&gamma| !a.iter().any(|&xi| greater(gamma, xi)))
        .collect()
}

/// The base S of the nilradical, kept as the layers produced by repeated
/// minimal-element extraction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseLayers {
    layers: Vec<BTreeSet<Root>>,
}

impl BaseLayers {
    /// Strip minimal elements layer by layer: S_i is the set of minimal
    /// elements of M_{i-1}, and M_i drops S_i together with everything that
    /// dominates a member of S_i.
    pub fn compute(comp: &Composition) -> BaseLayers {
        let mut remaining = comp.nilradical_roots();
        let mut layers = Vec::new();
        while !remaining.is_empty() {
            let layer = minimal_elements(&remaining);
            remaining = remaining
                .into_iter()
                .filter(|&gamma| {
                    !layer.contains(&gamma) && !layer.iter().any(|&xi| greater(gamma, xi))
                })
                .collect();
            layers.push(layer);
        }
        BaseLayers { layers }
    }

    pub fn layers(&self) -> &[BTreeSet<Root>] {
        &self.layers
    }

    /// Union of all layers.
    pub fn roots(&self) -> BTreeSet<Root> {
        self.layers.iter().flatten().copied().collect()
    }

    pub fn contains(&self, r: Root) -> bool {
        self.layers.iter().any(|l| l.contains(&r))
    }

    /// 1-based layer index of a base root.
    pub fn layer_of(&self, r: Root) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(&r)).map(|k| k + 1)
    }
}

/// Antidiagonal cells of the superdiagonal blocks X_{k,k+1}: for each k the
/// cells (R_k - t, R_k + 1 + t), 0 <= t < min(r_k, r_{k+1}).
pub fn antidiagonal_roots(comp: &Composition) -> BTreeSet<Root> {
    let mut out = BTreeSet::new();
    for k in 1..comp.num_blocks() {
        let rk = comp.partial_sum(k);
        let len = comp.sizes()[k - 1].min(comp.sizes()[k]);
        for t in 0..len {
            out.insert(Root::new(rk - t, rk + 1 + t));
        }
    }
    out
}

/// All superdiagonal antidiagonal cells must land in the base.
pub fn antidiagonal_check(comp: &Composition, base: &BaseLayers) -> bool {
    let s = base.roots();
    antidiagonal_roots(comp).iter().all(|r| s.contains(r))
}

/// A pair of base roots joined through the reductive part: the connecting
/// root alpha = (xi.j, xi_prime.i) lies inside a diagonal block, and
/// phi = alpha + xi_prime = (xi.j, xi_prime.j).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AdmissiblePair {
    pub xi: Root,
    pub xi_prime: Root,
    pub alpha: Root,
    pub phi: Root,
}

impl AdmissiblePair {
    pub fn as_json(&self) -> Value {
        json!({
            "xi": self.xi.as_json(),
            "xi_prime": self.xi_prime.as_json(),
            "alpha": self.alpha.as_json(),
            "phi": self.phi.as_json(),
        })
    }
}

/// Enumerate admissible pairs in (xi, xi_prime) lexicographic order and
/// check that distinct pairs never share a phi and that no phi falls in S.
pub fn admissible_pairs(
    comp: &Composition,
    base: &BaseLayers,
) -> Result<Vec<AdmissiblePair>, CoreError> {
    let s = base.roots();
    let delta_r = comp.reductive_roots();
    let mut pairs: Vec<AdmissiblePair> = Vec::new();
    for &xi in &s {
        for &xi_prime in &s {
            if xi.j < xi_prime.i && delta_r.contains(&Root::new(xi.j, xi_prime.i)) {
                let alpha = Root::new(xi.j, xi_prime.i);
                let phi = Root::new(xi.j, xi_prime.j);
                if let Some(prev) = pairs.iter().find(|p| p.phi == phi) {
                    return Err(CoreError::DuplicatePhi {
                        phi,
                        first: (prev.xi, prev.xi_prime),
                        second: (xi, xi_prime),
                    });
                }
                if s.contains(&phi) {
                    return Err(CoreError::PhiInBase(phi));
                }
                pairs.push(AdmissiblePair {
                    xi,
                    xi_prime,
                    alpha,
                    phi,
                });
            }
        }
    }
    Ok(pairs)
}

/// The broad base T: base roots together with every nilradical root lying
/// one step above or right of a base root within the same block.
pub fn broad_base(comp: &Composition, base: &BaseLayers) -> BTreeSet<Root> {
    let s = base.roots();
    let mut t = s.clone();
    for &xi in &comp.nilradical_roots() {
        let in_t = s.iter().any(|&gamma| {
            greater(xi, gamma)
                && comp.block_of(xi.i) == comp.block_of(gamma.i)
                && comp.block_of(xi.j) == comp.block_of(gamma.j)
        });
        if in_t {
            t.insert(xi);
        }
    }
    t
}

/// Root count of the longest descending chain from `gamma` inside M.
pub fn remoteness(comp: &Composition, gamma: Root) -> Result<usize, CoreError> {
    let m = comp.nilradical_roots();
    if !m.contains(&gamma) {
        return Err(CoreError::RootNotInM(gamma));
    }
    Ok(remoteness_table(comp)[&gamma])
}

/// Longest-chain table over all of M. Chain steps strictly decrease j - i,
/// so processing roots by increasing j - i is a topological order.
pub fn remoteness_table(comp: &Composition) -> std::collections::BTreeMap<Root, usize> {
    let m = comp.nilradical_roots();
    let mut order: Vec<Root> = m.iter().copied().collect();
    order.sort_by_key(|r| r.j - r.i);
    let mut table = std::collections::BTreeMap::new();
    for &gamma in &order {
        let best = m
            .iter()
            .filter(|&&xi| greater(gamma, xi))
            .map(|xi| table[xi])
            .max()
            .unwrap_or(0);
        table.insert(gamma, best + 1);
    }
    table
}

/// Base roots strictly inside `gamma` that are maximal for the inside
/// relation. These index the leading product of the triangular relations.
pub fn prec_maximal_in_s(base: &BaseLayers, gamma: Root) -> BTreeSet<Root> {
    let inside: BTreeSet<Root> = base
        .roots()
        .into_iter()
        .filter(|&phi| prec(phi, gamma))
        .collect();
    inside
        .iter()
        .copied()
        .filter(|&phi| !inside.iter().any(|&other| prec(phi, other)))
        .collect()
}

/// Everything derived from a composition: nilradical and reductive roots,
/// base layers, admissible pairs, broad base and the block-distance-2 set.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    comp: Composition,
    m: BTreeSet<Root>,
    delta_r: BTreeSet<Root>,
    base: BaseLayers,
    pairs: Vec<AdmissiblePair>,
    phi: BTreeSet<Root>,
    t: BTreeSet<Root>,
    m_prime: BTreeSet<Root>,
}

impl GeneratorSet {
    pub fn new(comp: Composition) -> Result<Self, CoreError> {
        let m = comp.nilradical_roots();
        let delta_r = comp.reductive_roots();
        let base = BaseLayers::compute(&comp);
        let pairs = admissible_pairs(&comp, &base)?;
        let phi: BTreeSet<Root> = pairs.iter().map(|p| p.phi).collect();
        let t = broad_base(&comp, &base);
        let m_prime = comp.m_prime();

        let s = base.roots();
        debug_assert!(s.is_subset(&t) && t.is_subset(&m));
        debug_assert!(m.difference(&m_prime).all(|r| t.contains(r)));
        debug_assert!(phi.is_disjoint(&s));
        debug_assert_eq!(phi.len(), pairs.len());

        Ok(GeneratorSet {
            comp,
            m,
            delta_r,
            base,
            pairs,
            phi,
            t,
            m_prime,
        })
    }

    pub fn from_sizes(sizes: Vec<usize>) -> Result<Self, CoreError> {
        GeneratorSet::new(Composition::new(sizes)?)
    }

    pub fn composition(&self) -> &Composition {
        &self.comp
    }

    pub fn nilradical(&self) -> &BTreeSet<Root> {
        &self.m
    }

    pub fn reductive(&self) -> &BTreeSet<Root> {
        &self.delta_r
    }

    pub fn base(&self) -> &BaseLayers {
        &self.base
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    pub fn phi(&self) -> &BTreeSet<Root> {
        &self.phi
    }

    pub fn broad(&self) -> &BTreeSet<Root> {
        &self.t
    }

    pub fn m_prime(&self) -> &BTreeSet<Root> {
        &self.m_prime
    }

    pub fn remoteness(&self, gamma: Root) -> Result<usize, CoreError> {
        remoteness(&self.comp, gamma)
    }

    /// Two text grids: one marking the base and the phi roots, one marking
    /// the base and the rest of the broad base. Cells: '.' outside M, 'o'
    /// in M, 'S' base, 'X' phi, 'T' broad base beyond S.
    pub fn render_diagrams(&self) -> String {
        let s = self.base.roots();
        let mut out = String::new();
        out.push_str("extended base\n");
        out.push_str(&self.render_grid(|r| {
            if s.contains(&r) {
                'S'
            } else if self.phi.contains(&r) {
                'X'
            } else if self.m.contains(&r) {
                'o'
            } else {
                '.'
            }
        }));
        out.push_str("broad base\n");
        out.push_str(&self.render_grid(|r| {
            if s.contains(&r) {
                'S'
            } else if self.t.contains(&r) {
                'T'
            } else if self.m.contains(&r) {
                'o'
            } else {
                '.'
            }
        }));
        out
    }

    fn render_grid(&self, cell: impl Fn(Root) -> char) -> String {
        let n = self.comp.n();
        let mut out = String::new();
        for i in 1..=n {
            let mut row = Vec::with_capacity(n);
            for j in 1..=n {
                if j > i {
                    row.push(cell(Root::new(i, j)));
                } else {
                    row.push('.');
                }
            }
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let set_json = |set: &BTreeSet<Root>| -> Value {
            Value::Array(set.iter().map(|r| r.as_json()).collect())
        };
        json!({
            "composition": self.comp.as_json(),
            "M": set_json(&self.m),
            "S_layers": Value::Array(
                self.base
                    .layers()
                    .iter()
                    .map(|layer| Value::Array(layer.iter().map(|r| r.as_json()).collect()))
                    .collect()
            ),
            "pairs": Value::Array(self.pairs.iter().map(|p| p.as_json()).collect()),
            "phi": set_json(&self.phi),
            "T": set_json(&self.t),
            "M_prime": set_json(&self.m_prime),
        })
    }
}
