//! The invariant generator polynomials attached to a generator set: minors
//! M for base roots, pair sums L for admissible pairs, broad generators N
//! for broad-base roots, and the restrictions to the coordinate slices
//! spanned by the extended base and by the broad base.

use std::collections::BTreeSet;

use crate::error::CoreError;
use crate::poly::{determinant, Polynomial, VariableId};
use crate::roots::{prec, AdmissiblePair, GeneratorSet, Root};

/// Row and column index sets of the minor attached to a root: the rows are
/// the root's own row together with the rows of the base roots strictly
/// inside it, the columns their columns together with the root's own column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinorSpec {
    pub gamma: Root,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(gens: &GeneratorSet, gamma: Root) -> Result<Self, CoreError> {
        if !gens.nilradical().contains(&gamma) {
            return Err(CoreError::RootNotInM(gamma));
        }
        let inside: Vec<Root> = gens
            .base()
            .roots()
            .into_iter()
            .filter(|&phi| prec(phi, gamma))
            .collect();
        let mut rows: Vec<usize> = inside.iter().map(|r| r.i).collect();
        rows.push(gamma.i);
        rows.sort_unstable();
        let mut cols: Vec<usize> = inside.iter().map(|r| r.j).collect();
        cols.push(gamma.j);
        cols.sort_unstable();
        Ok(MinorSpec { gamma, rows, cols })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

impl GeneratorSet {
    /// Base roots strictly inside `gamma`; the minor index set.
    pub fn inside_base_roots(&self, gamma: Root) -> BTreeSet<Root> {
        self.base()
            .roots()
            .into_iter()
            .filter(|&phi| prec(phi, gamma))
            .collect()
    }

    /// The minor M attached to any nilradical root. Minimal roots give the
    /// bare variable.
    pub fn minor(&self, gamma: Root) -> Result<Polynomial, CoreError> {
        let spec = MinorSpec::new(self, gamma)?;
        let m = self.nilradical();
        let grid: Vec<Vec<Polynomial>> = spec
            .rows
            .iter()
            .map(|&i| {
                spec.cols
                    .iter()
                    .map(|&j| {
                        if i < j && m.contains(&Root::new(i, j)) {
                            Polynomial::var(VariableId::Matrix(Root::new(i, j)))
                        } else {
                            Polynomial::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(determinant(&grid))
    }

    /// The invariant attached to an admissible pair: sum over the splittings
    /// alpha_1 + alpha_2 of the connecting root (zero parts allowed) of the
    /// minor products M_{xi+alpha_1} M_{alpha_2+xi'}.
    pub fn pair_invariant(&self, q: &AdmissiblePair) -> Result<Polynomial, CoreError> {
        let (xi, xi_prime, alpha) = (q.xi, q.xi_prime, q.alpha);
        let mut sum = Polynomial::zero();
        // split point c runs over alpha.i ..= alpha.j; the endpoints give
        // the zero-part splittings
        for c in alpha.i..=alpha.j {
            let left = if c == alpha.i {
                xi
            } else {
                Root::new(xi.i, c)
            };
            let right = if c == alpha.j {
                xi_prime
            } else {
                Root::new(c, xi_prime.j)
            };
            if c != alpha.i && !self.reductive().contains(&Root::new(alpha.i, c)) {
                continue;
            }
            if c != alpha.j && !self.reductive().contains(&Root::new(c, alpha.j)) {
                continue;
            }
            let term = &self.minor(left)? * &self.minor(right)?;
            sum = &sum + &term;
        }
        Ok(sum)
    }

    /// The broad-base generator: the bare variable on superdiagonal blocks,
    /// the minor at block distance two or more.
    pub fn broad_invariant(&self, xi: Root) -> Result<Polynomial, CoreError> {
        if !self.broad().contains(&xi) {
            return Err(CoreError::RootNotInT(xi));
        }
        if self.m_prime().contains(&xi) {
            self.minor(xi)
        } else {
            Ok(Polynomial::var(VariableId::Matrix(xi)))
        }
    }

    /// All minors for base roots, ordered by layer then lexicographically.
    pub fn base_minors(&self) -> Vec<(Root, Polynomial)> {
        let mut roots: Vec<Root> = self.base().roots().into_iter().collect();
        roots.sort_by_key(|&r| (self.base().layer_of(r).unwrap(), r));
        roots
            .into_iter()
            .map(|r| (r, self.minor(r).expect("base roots lie in M")))
            .collect()
    }

    /// All pair invariants, ordered by phi.
    pub fn pair_invariants(&self) -> Vec<(Root, Polynomial)> {
        let mut out: Vec<(Root, Polynomial)> = self
            .pairs()
            .iter()
            .map(|q| {
                (
                    q.phi,
                    self.pair_invariant(q).expect("pair minors lie in M"),
                )
            })
            .collect();
        out.sort_by_key(|&(phi, _)| phi);
        out
    }

    /// All broad-base generators, in root order.
    pub fn broad_invariants(&self) -> Vec<(Root, Polynomial)> {
        self.broad()
            .iter()
            .map(|&r| (r, self.broad_invariant(r).expect("broad roots lie in T")))
            .collect()
    }

    pub fn slice_extended(&self) -> Slice {
        Slice {
            support: self.base().roots().union(self.phi()).copied().collect(),
        }
    }

    pub fn slice_broad(&self) -> Slice {
        Slice {
            support: self.broad().clone(),
        }
    }
}

/// A coordinate slice of the nilradical: the span of the cells in
/// `support`. Restriction maps x_gamma to the slice coordinate c_gamma on
/// the support and to zero off it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Slice {
    support: BTreeSet<Root>,
}

impl Slice {
    pub fn support(&self) -> &BTreeSet<Root> {
        &self.support
    }

    pub fn restrict(&self, f: &Polynomial) -> Polynomial {
        f.map_matrix_vars(|r| {
            self.support
                .contains(&r)
                .then_some(VariableId::Slice(r))
        })
    }
}
