//! Exact sparse multivariate polynomials over the rationals.
//!
//! Variables are indexed by matrix cells (x), one-parameter subgroup
//! parameters (t), slice coordinates (c) and abstract generator symbols (y).
//! Terms are kept in a canonical graded-lex order so that equality is
//! structural equality, and coefficients are arbitrary-precision rationals:
//! every identity checked downstream holds exactly or not at all.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::CoreError;
use crate::roots::Root;

/// A variable of the ambient polynomial ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VariableId {
    /// Group parameter t_k; index 0 prints as plain `t`.
    Param(u32),
    /// Matrix entry x_{i,j}.
    Matrix(Root),
    /// Slice coordinate c_{i,j}.
    Slice(Root),
    /// Abstract generator symbol y_{i,j}.
    Generator(Root),
}

impl VariableId {
    /// Compact unambiguous token used in JSON term lists.
    pub fn token(&self) -> String {
        match self {
            VariableId::Param(k) => format!("t({k})"),
            VariableId::Matrix(r) => format!("x({},{})", r.i, r.j),
            VariableId::Slice(r) => format!("c({},{})", r.i, r.j),
            VariableId::Generator(r) => format!("y({},{})", r.i, r.j),
        }
    }

    pub fn parse_token(s: &str) -> Result<Self, CoreError> {
        let bad = || CoreError::InvalidInput(format!("cannot parse variable token {s:?}"));
        let kind = s.chars().next().ok_or_else(bad)?;
        let rest = &s[kind.len_utf8()..];
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        match kind {
            't' => Ok(VariableId::Param(inner.parse().map_err(|_| bad())?)),
            'x' | 'c' | 'y' => {
                let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                let i: usize = a.trim().parse().map_err(|_| bad())?;
                let j: usize = b.trim().parse().map_err(|_| bad())?;
                if !(1 <= i && i < j) {
                    return Err(bad());
                }
                let r = Root::new(i, j);
                Ok(match kind {
                    'x' => VariableId::Matrix(r),
                    'c' => VariableId::Slice(r),
                    _ => VariableId::Generator(r),
                })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableId::Param(0) => write!(f, "t"),
            VariableId::Param(k) => write!(f, "t_{{{k}}}"),
            VariableId::Matrix(r) => write!(f, "x_{{{},{}}}", r.i, r.j),
            VariableId::Slice(r) => write!(f, "c_{{{},{}}}", r.i, r.j),
            VariableId::Generator(r) => write!(f, "y_{{{},{}}}", r.i, r.j),
        }
    }
}

/// Sparse exponent vector, sorted by variable, exponents strictly positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VariableId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VariableId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VariableId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        for w in pairs.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate variable in monomial");
        }
        Monomial(pairs)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent_of(&self, v: VariableId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|idx| self.0[idx].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VariableId, u32)> + '_ {
        self.0.iter().copied()
    }

    /// Merge exponents of two monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Remove `exp` powers of `v`; the monomial must contain them.
    fn strip(&self, v: VariableId, exp: u32) -> Monomial {
        if exp == 0 {
            return self.clone();
        }
        let mut out = self.0.clone();
        let idx = out
            .binary_search_by_key(&v, |&(w, _)| w)
            .expect("variable not present");
        assert!(out[idx].1 >= exp);
        if out[idx].1 == exp {
            out.remove(idx);
        } else {
            out[idx].1 -= exp;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then lexicographically with
    /// smaller `VariableId`s more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact sparse polynomial: canonical term map, no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Polynomial::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: VariableId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigRational::one());
        Polynomial { terms }
    }

    pub fn from_terms(pairs: Vec<(Monomial, BigRational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in pairs {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// All variables with a nonzero exponent somewhere.
    pub fn support(&self) -> BTreeSet<VariableId> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect()
    }

    pub fn degree_in(&self, v: VariableId) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(v))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of v^k: the terms with exponent exactly k, with v^k
    /// divided out.
    pub fn coefficient_of(&self, v: VariableId, k: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.exponent_of(v) == k {
                out.add_term(m.strip(v, k), c.clone());
            }
        }
        out
    }

    /// Divide every term by v^k; every term must contain that power.
    pub fn divide_by_power(&self, v: VariableId, k: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.strip(v, k), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (m.clone(), q * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Apply a ring homomorphism fixing every variable absent from `map`.
    pub fn substitute(&self, map: &BTreeMap<VariableId, Polynomial>) -> Polynomial {
        let mut power_cache: HashMap<(VariableId, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut passthrough: Vec<(VariableId, u32)> = Vec::new();
            let mut replaced = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                match map.get(&v) {
                    None => passthrough.push((v, e)),
                    Some(p) => {
                        let powered = power_cache
                            .entry((v, e))
                            .or_insert_with(|| p.pow(e))
                            .clone();
                        replaced = &replaced * &powered;
                    }
                }
            }
            if !passthrough.is_empty() {
                let base = Polynomial::from_terms(vec![(
                    Monomial::from_pairs(passthrough),
                    BigRational::one(),
                )]);
                replaced = &replaced * &base;
            }
            out = &out + &replaced;
        }
        out
    }

    /// Rename or drop matrix variables: shared helper for slice restrictions.
    pub fn map_matrix_vars(&self, f: impl Fn(Root) -> Option<VariableId>) -> Polynomial {
        let mut map = BTreeMap::new();
        for v in self.support() {
            if let VariableId::Matrix(r) = v {
                match f(r) {
                    Some(w) => {
                        map.insert(v, Polynomial::var(w));
                    }
                    None => {
                        map.insert(v, Polynomial::zero());
                    }
                }
            }
        }
        self.substitute(&map)
    }

    pub fn differentiate(&self, v: VariableId) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e > 0 {
                out.add_term(
                    m.strip(v, 1),
                    c * BigRational::from_integer(BigInt::from(e)),
                );
            }
        }
        out
    }

    /// Exact value at a point; every variable of the polynomial must be
    /// assigned.
    pub fn evaluate(
        &self,
        point: &BTreeMap<VariableId, BigRational>,
    ) -> Result<BigRational, CoreError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.iter() {
                let val = point.get(&v).ok_or(CoreError::MissingAssignment(v))?;
                for _ in 0..e {
                    term *= val;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Canonical text rendering, terms in descending graded-lex order.
    fn render(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if !mag.is_one() || m.is_one() {
                write!(f, "{mag}")?;
            }
            for (v, e) in m.iter() {
                write!(f, "{v}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }

    /// JSON term list: `[{"monomial": [[token, exp], ...], "coeff": "p/q"}]`
    /// in descending canonical order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| {
                    json!({
                        "monomial": Value::Array(
                            m.iter()
                                .map(|(v, e)| json!([v.token(), e]))
                                .collect()
                        ),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Polynomial, CoreError> {
        let arr = v
            .as_array()
            .ok_or_else(|| CoreError::InvalidInput("polynomial JSON must be an array".into()))?;
        let mut out = Polynomial::zero();
        for entry in arr {
            let mono = entry
                .get("monomial")
                .and_then(Value::as_array)
                .ok_or_else(|| CoreError::InvalidInput("term missing \"monomial\"".into()))?;
            let coeff = entry
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| CoreError::InvalidInput("term missing \"coeff\"".into()))?;
            let c = BigRational::from_str(coeff)
                .map_err(|_| CoreError::InvalidInput(format!("bad rational {coeff:?}")))?;
            let mut pairs = Vec::new();
            for pair in mono {
                let token = pair
                    .get(0)
                    .and_then(Value::as_str)
                    .ok_or_else(|| CoreError::InvalidInput("bad monomial entry".into()))?;
                let exp = pair
                    .get(1)
                    .and_then(Value::as_u64)
                    .ok_or_else(|| CoreError::InvalidInput("bad exponent".into()))?;
                pairs.push((VariableId::parse_token(token)?, exp as u32));
            }
            out.add_term(Monomial::from_pairs(pairs), c);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// Exact determinant of a square polynomial matrix by cofactor expansion,
/// memoized on the set of remaining columns.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "determinant requires a square matrix");
    }
    if n == 0 {
        return Polynomial::one();
    }
    assert!(n <= 63, "determinant limited to 63x63");
    let full: u64 = (1u64 << n) - 1;
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    det_rec(m, full, &mut memo)
}

fn det_rec(m: &[Vec<Polynomial>], mask: u64, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
    let k = mask.count_ones() as usize;
    if k == 0 {
        return Polynomial::one();
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let row = m.len() - k;
    let mut acc = Polynomial::zero();
    let mut pos = 0u32;
    for col in 0..m.len() {
        if mask & (1u64 << col) == 0 {
            continue;
        }
        let entry = &m[row][col];
        if !entry.is_zero() {
            let sub = det_rec(m, mask & !(1u64 << col), memo);
            let contrib = entry * &sub;
            acc = if pos % 2 == 0 {
                &acc + &contrib
            } else {
                &acc - &contrib
            };
        }
        pos += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}
