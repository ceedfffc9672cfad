//! Canonical forms on the broad-base slice and expression of invariants in
//! the broad generators.
//!
//! Every broad generator restricted to the slice is linear in its own
//! coordinate, N|_slice = A c_xi + B, where A and B only involve
//! coordinates of strictly smaller remoteness and A equals, up to the
//! cofactor sign, the product of the restricted generators of the maximal
//! base roots strictly inside xi. Solving these relations in increasing
//! remoteness order reconstructs the unique slice point with prescribed
//! invariant values; eliminating coordinates in decreasing remoteness order
//! rewrites any invariant as a Laurent expression in the generators whose
//! denominator is a monomial, and a genuine polynomial invariant always
//! reduces to denominator one.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::action::RationalMatrix;
use crate::error::CoreError;
use crate::generators::Slice;
use crate::poly::{Polynomial, VariableId};
use crate::roots::{prec_maximal_in_s, GeneratorSet, Root};
use crate::verify::{check_invariance, GroupTag};

/// Exact values of every broad generator at a point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantVector {
    values: BTreeMap<Root, BigRational>,
}

impl InvariantVector {
    pub fn new(gens: &GeneratorSet, values: BTreeMap<Root, BigRational>) -> Self {
        assert!(
            values.keys().copied().collect::<std::collections::BTreeSet<_>>() == *gens.broad(),
            "invariant vector must assign exactly the broad-base roots"
        );
        InvariantVector { values }
    }

    pub fn get(&self, xi: Root) -> &BigRational {
        &self.values[&xi]
    }

    pub fn values(&self) -> &BTreeMap<Root, BigRational> {
        &self.values
    }
}

/// Coordinates of a point on the broad-base slice.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalPoint {
    coords: BTreeMap<Root, BigRational>,
}

impl CanonicalPoint {
    pub fn coords(&self) -> &BTreeMap<Root, BigRational> {
        &self.coords
    }

    pub fn get(&self, xi: Root) -> &BigRational {
        &self.coords[&xi]
    }

    /// The slice point as a matrix of the ambient dimension.
    pub fn to_matrix(&self, gens: &GeneratorSet) -> RationalMatrix {
        RationalMatrix::from_coords(gens.composition().n(), &self.coords)
    }
}

/// Numerator and monomial denominator of an invariant written in the
/// generator symbols y.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorExpression {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
}

struct Relation {
    /// Coefficient of c_xi in the restricted generator.
    lead: Polynomial,
    /// Constant part in c_xi of the restricted generator.
    tail: Polynomial,
    /// Maximal base roots strictly inside xi.
    lead_roots: Vec<Root>,
    /// Cofactor sign relating `lead` to the product of the restricted
    /// generators over `lead_roots`.
    lead_sign: i64,
}

/// The triangular relations of the broad-base slice.
pub struct SliceSystem {
    slice: Slice,
    order: Vec<Root>,
    relations: BTreeMap<Root, Relation>,
    restricted: BTreeMap<Root, Polynomial>,
}

impl SliceSystem {
    pub fn new(gens: &GeneratorSet) -> Self {
        let slice = gens.slice_broad();
        let mut order: Vec<Root> = gens.broad().iter().copied().collect();
        order.sort_by_key(|&r| (gens.remoteness(r).unwrap(), r));

        let mut relations = BTreeMap::new();
        let mut restricted = BTreeMap::new();
        for &xi in &order {
            let n_xi = gens.broad_invariant(xi).expect("broad root");
            let r = slice.restrict(&n_xi);
            let cv = VariableId::Slice(xi);
            assert_eq!(r.degree_in(cv), 1, "restricted generator linear in own coordinate");
            let lead = r.coefficient_of(cv, 1);
            let tail = r.coefficient_of(cv, 0);
            let inside = gens.inside_base_roots(xi);
            let lead_roots: Vec<Root> = if gens.m_prime().contains(&xi) {
                prec_maximal_in_s(gens.base(), xi).into_iter().collect()
            } else {
                Vec::new()
            };
            let lead_sign = if gens.m_prime().contains(&xi) && inside.len() % 2 == 1 {
                -1
            } else {
                1
            };
            relations.insert(
                xi,
                Relation {
                    lead,
                    tail,
                    lead_roots,
                    lead_sign,
                },
            );
            restricted.insert(xi, r);
        }
        SliceSystem {
            slice,
            order,
            relations,
            restricted,
        }
    }

    pub fn slice(&self) -> &Slice {
        &self.slice
    }

    /// Restricted generator N|_slice in the slice coordinates.
    pub fn restricted(&self, xi: Root) -> &Polynomial {
        &self.restricted[&xi]
    }

    /// Checked identity: lead = sign * product of restricted generators
    /// over the maximal inside base roots (empty product for superdiagonal
    /// roots). Returns the sign, or an error naming the mismatch.
    fn monomial_lead(&self, xi: Root) -> Result<i64, CoreError> {
        let rel = &self.relations[&xi];
        let mut product = Polynomial::one();
        for &phi in &rel.lead_roots {
            product = &product * &self.restricted[&phi];
        }
        if rel.lead_sign < 0 {
            product = -&product;
        }
        if product != rel.lead {
            return Err(CoreError::NonMonomialDenominator {
                xi,
                actual: rel.lead.to_string(),
            });
        }
        Ok(rel.lead_sign)
    }

    /// Solve for the slice coordinates realizing the given invariant
    /// values, in increasing remoteness order.
    pub fn solve(&self, v: &InvariantVector) -> Result<CanonicalPoint, CoreError> {
        let mut known: BTreeMap<VariableId, BigRational> = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for &xi in &self.order {
            let rel = &self.relations[&xi];
            let a = rel
                .lead
                .evaluate(&known)
                .expect("lead involves only lower-remoteness coordinates");
            if a.is_zero() {
                let product = if rel.lead_roots.is_empty() {
                    rel.lead.to_string()
                } else {
                    rel.lead_roots
                        .iter()
                        .map(|r| format!("N_{r}"))
                        .collect::<Vec<_>>()
                        .join("*")
                };
                return Err(CoreError::DegenerateOrbit { xi, product });
            }
            let b = rel
                .tail
                .evaluate(&known)
                .expect("tail involves only lower-remoteness coordinates");
            let c = (v.get(xi) - b) / a;
            known.insert(VariableId::Slice(xi), c.clone());
            coords.insert(xi, c);
        }
        Ok(CanonicalPoint { coords })
    }

    /// Rewrite a polynomial in the slice coordinates as a Laurent
    /// expression in the generator symbols: returns (numerator, map of
    /// denominator exponents, overall sign). Coordinates are eliminated in
    /// decreasing remoteness order through c_xi = (y_xi - B) / A.
    fn eliminate(
        &self,
        f_slice: &Polynomial,
    ) -> Result<(Polynomial, BTreeMap<Root, u32>, i64), CoreError> {
        let mut g = f_slice.clone();
        let mut den: BTreeMap<Root, u32> = BTreeMap::new();
        let mut sign = 1i64;
        for &xi in self.order.iter().rev() {
            let cv = VariableId::Slice(xi);
            let d = g.degree_in(cv);
            if d == 0 {
                continue;
            }
            let lead_sign = self.monomial_lead(xi)?;
            let rel = &self.relations[&xi];
            let y = Polynomial::var(VariableId::Generator(xi));
            let shifted = &y - &rel.tail;
            let mut acc = Polynomial::zero();
            for k in 0..=d {
                let gk = g.coefficient_of(cv, k);
                if gk.is_zero() {
                    continue;
                }
                let term = &(&gk * &shifted.pow(k)) * &rel.lead.pow(d - k);
                acc = &acc + &term;
            }
            g = acc;
            for &phi in &rel.lead_roots {
                *den.entry(phi).or_insert(0) += d;
            }
            if lead_sign < 0 && d % 2 == 1 {
                sign = -sign;
            }
        }
        debug_assert!(g
            .support()
            .iter()
            .all(|v| matches!(v, VariableId::Generator(_))));
        Ok((g, den, sign))
    }

    /// Cancel shared generator powers between numerator and denominator and
    /// fold the sign into the numerator.
    fn reduce(
        &self,
        mut num: Polynomial,
        mut den: BTreeMap<Root, u32>,
        sign: i64,
    ) -> GeneratorExpression {
        den.retain(|_, e| *e > 0);
        if !num.is_zero() {
            let dividers: Vec<(Root, u32)> = den
                .iter()
                .map(|(&r, &e)| {
                    let min_exp = num
                        .terms()
                        .map(|(m, _)| m.exponent_of(VariableId::Generator(r)))
                        .min()
                        .unwrap_or(0);
                    (r, e.min(min_exp))
                })
                .collect();
            for (r, cancel) in dividers {
                if cancel == 0 {
                    continue;
                }
                let v = VariableId::Generator(r);
                num = num.divide_by_power(v, cancel);
                let e = den.get_mut(&r).unwrap();
                *e -= cancel;
                if *e == 0 {
                    den.remove(&r);
                }
            }
        } else {
            den.clear();
        }
        if sign < 0 {
            num = -&num;
        }
        let mut denominator = Polynomial::one();
        for (r, e) in den {
            denominator = &denominator * &Polynomial::var(VariableId::Generator(r)).pow(e);
        }
        GeneratorExpression {
            numerator: num,
            denominator,
        }
    }
}

/// Evaluate every broad generator at a nilradical point.
pub fn invariant_values(
    gens: &GeneratorSet,
    x: &RationalMatrix,
) -> Result<InvariantVector, CoreError> {
    x.supported_on_nilradical(gens.composition())?;
    let point = x.as_point(gens.composition());
    let mut values = BTreeMap::new();
    for &xi in gens.broad() {
        let n_xi = gens.broad_invariant(xi)?;
        values.insert(xi, n_xi.evaluate(&point)?);
    }
    Ok(InvariantVector::new(gens, values))
}

/// The unique slice point with the given invariant values, when the
/// leading products stay nonzero along the solve.
pub fn reconstruct_canonical(
    gens: &GeneratorSet,
    v: &InvariantVector,
) -> Result<CanonicalPoint, CoreError> {
    SliceSystem::new(gens).solve(v)
}

/// Canonical representative of the orbit of x on the broad-base slice.
pub fn canonical_form(
    gens: &GeneratorSet,
    x: &RationalMatrix,
) -> Result<CanonicalPoint, CoreError> {
    reconstruct_canonical(gens, &invariant_values(gens, x)?)
}

/// Write a polynomial invariant as numerator over a monomial denominator in
/// the generator symbols. Rejects polynomials that are not invariant under
/// the unipotent radical; a genuine invariant always comes back with
/// denominator one.
pub fn express_in_generators(
    gens: &GeneratorSet,
    f: &Polynomial,
) -> Result<GeneratorExpression, CoreError> {
    for v in f.support() {
        match v {
            VariableId::Matrix(r) if gens.nilradical().contains(&r) => {}
            other => {
                return Err(CoreError::InvalidInput(format!(
                    "expression input must live in the nilradical variables; found {other}"
                )))
            }
        }
    }
    let report = check_invariance(gens, f, GroupTag::UnipotentRadical, "input");
    if let Some((generator, _)) = report.failures.first() {
        return Err(CoreError::NotInvariant {
            generator: *generator,
        });
    }
    let system = SliceSystem::new(gens);
    let f_slice = system.slice().restrict(f);
    let (num, den, sign) = system.eliminate(&f_slice)?;
    Ok(system.reduce(num, den, sign))
}

/// Expand a polynomial in the generator symbols into the matrix variables.
pub fn expand_generator_polynomial(gens: &GeneratorSet, p: &Polynomial) -> Polynomial {
    let mut map = BTreeMap::new();
    for v in p.support() {
        if let VariableId::Generator(r) = v {
            map.insert(v, gens.broad_invariant(r).expect("generator symbol root in T"));
        }
    }
    p.substitute(&map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn gens(sizes: &[usize]) -> GeneratorSet {
        GeneratorSet::from_sizes(sizes.to_vec()).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn x(i: usize, j: usize) -> Polynomial {
        Polynomial::var(VariableId::Matrix(Root::new(i, j)))
    }

    fn y(i: usize, j: usize) -> Polynomial {
        Polynomial::var(VariableId::Generator(Root::new(i, j)))
    }

    #[test]
    fn invariant_values_at_zero_and_slice_points() {
        let g = gens(&[2, 1, 3, 2]);
        let zero = RationalMatrix::zero(8);
        let v = invariant_values(&g, &zero).unwrap();
        assert!(v.values().values().all(|q| q.is_zero()));

        // a slice point reproduces the restricted evaluations
        let mut coords = BTreeMap::new();
        for (idx, &xi) in g.broad().iter().enumerate() {
            coords.insert(xi, rat(idx as i64 + 1));
        }
        let z = RationalMatrix::from_coords(8, &coords);
        let v = invariant_values(&g, &z).unwrap();
        let system = SliceSystem::new(&g);
        let point: BTreeMap<VariableId, BigRational> = coords
            .iter()
            .map(|(&r, q)| (VariableId::Slice(r), q.clone()))
            .collect();
        for &xi in g.broad() {
            let expected = system.restricted(xi).evaluate(&point).unwrap();
            assert_eq!(v.get(xi), &expected);
        }
    }

    #[test]
    fn slice_points_are_fixed_by_canonicalization() {
        let g = gens(&[2, 1, 3, 2]);
        let mut coords = BTreeMap::new();
        for (idx, &xi) in g.broad().iter().enumerate() {
            coords.insert(xi, rat(idx as i64 + 2));
        }
        let z = RationalMatrix::from_coords(8, &coords);
        let canon = canonical_form(&g, &z).unwrap();
        assert_eq!(canon.coords(), &coords);
    }

    #[test]
    fn degenerate_orbit_reported_with_product() {
        let g = gens(&[2, 1, 3, 2]);
        let mut values = BTreeMap::new();
        for &xi in g.broad() {
            values.insert(xi, rat(1));
        }
        values.insert(Root::new(2, 3), rat(0));
        let v = InvariantVector::new(&g, values);
        match reconstruct_canonical(&g, &v) {
            Err(CoreError::DegenerateOrbit { product, .. }) => {
                assert!(product.contains("(2,3)"));
            }
            other => panic!("expected degenerate orbit, got {other:?}"),
        }
    }

    #[test]
    fn express_generator_is_its_symbol() {
        let g = gens(&[2, 1, 3, 2]);
        for &(i, j) in &[(1, 5), (5, 8), (1, 3), (6, 7)] {
            let n = g.broad_invariant(Root::new(i, j)).unwrap();
            let e = express_in_generators(&g, &n).unwrap();
            assert_eq!(e.numerator, y(i, j));
            assert_eq!(e.denominator, Polynomial::one());
        }
    }

    #[test]
    fn express_polynomial_combination() {
        let g = gens(&[2, 1, 3, 2]);
        let f = &(&g.broad_invariant(Root::new(1, 5)).unwrap()
            * &g.broad_invariant(Root::new(2, 3)).unwrap())
            + &(&Polynomial::from_integer(3) * &g.broad_invariant(Root::new(3, 4)).unwrap());
        let e = express_in_generators(&g, &f).unwrap();
        let expected = &(&y(1, 5) * &y(2, 3)) + &(&Polynomial::from_integer(3) * &y(3, 4));
        assert_eq!(e.numerator, expected);
        assert_eq!(e.denominator, Polynomial::one());
    }

    #[test]
    fn express_bare_broad_coordinate() {
        let g = gens(&[2, 1, 3, 2]);
        let e = express_in_generators(&g, &x(1, 3)).unwrap();
        assert_eq!(e.numerator, y(1, 3));
        assert_eq!(e.denominator, Polynomial::one());
    }

    #[test]
    fn express_rejects_noninvariants() {
        let g = gens(&[1, 2, 1]);
        match express_in_generators(&g, &x(1, 4)) {
            Err(CoreError::NotInvariant { generator }) => {
                assert!(g.nilradical().contains(&generator));
            }
            other => panic!("expected NotInvariant, got {other:?}"),
        }
    }

    #[test]
    fn express_constant() {
        let g = gens(&[1, 2, 1]);
        let e = express_in_generators(&g, &Polynomial::from_integer(7)).unwrap();
        assert_eq!(e.numerator, Polynomial::from_integer(7));
        assert_eq!(e.denominator, Polynomial::one());
    }

    #[test]
    fn express_rejects_foreign_variables() {
        let g = gens(&[1, 2, 1]);
        for f in [
            Polynomial::var(VariableId::Param(0)),
            Polynomial::var(VariableId::Generator(Root::new(1, 2))),
            x(2, 3), // reductive cell, not a nilradical variable
        ] {
            assert!(matches!(
                express_in_generators(&g, &f),
                Err(CoreError::InvalidInput(_))
            ));
        }
    }

    #[test]
    fn canonical_form_small_hand_case() {
        let g = gens(&[1, 2, 1]);
        // x generic: coordinates on (1,2),(1,3),(2,4),(3,4) plus (1,4)
        let mut coords = BTreeMap::new();
        coords.insert(Root::new(1, 2), rat(2));
        coords.insert(Root::new(1, 3), rat(3));
        coords.insert(Root::new(2, 4), rat(5));
        coords.insert(Root::new(3, 4), rat(7));
        coords.insert(Root::new(1, 4), rat(11));
        let x0 = RationalMatrix::from_coords(4, &coords);
        let canon = canonical_form(&g, &x0).unwrap();
        // (1,4) is not a broad-base root, so it has no slice coordinate
        assert!(!canon.coords().contains_key(&Root::new(1, 4)));
        // all broad generators here are bare coordinates
        for &xi in g.broad() {
            assert_eq!(canon.get(xi), &coords[&xi]);
        }
        let v1 = invariant_values(&g, &x0).unwrap();
        let v2 = invariant_values(&g, &canon.to_matrix(&g)).unwrap();
        assert_eq!(v1, v2);
    }
}
