//! The formal matrix of nilradical variables and the adjoint action of
//! one-parameter subgroups g_{u,v}(t) = I + t E_{u,v} on it.
//!
//! Conjugation is computed as the literal product
//! (I + t E_{u,v}) X (I - t E_{u,v}); on matrices supported inside the
//! nilradical this reproduces the two substitution rules
//! x_{a,b} -> x_{a,b} + t x_{v,b} (a = u) and
//! x_{a,b} -> x_{a,b} - t x_{a,u} (b = v),
//! reading entries outside the support as zero. Acting on a polynomial
//! substitutes each matrix variable by the corresponding entry of the
//! conjugated formal matrix, so invariance checks are identities in t.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

use crate::error::CoreError;
use crate::poly::{Polynomial, VariableId};
use crate::roots::{Composition, Root};

/// One-parameter subgroup element g_{row,col}(parameter).
#[derive(Clone, Debug)]
pub struct GroupGenerator {
    row: usize,
    col: usize,
    parameter: Polynomial,
}

impl GroupGenerator {
    pub fn new(row: usize, col: usize, parameter: Polynomial) -> Self {
        assert!(1 <= row && row < col, "generator requires row < col");
        GroupGenerator {
            row,
            col,
            parameter,
        }
    }

    /// Generator with the symbolic parameter t.
    pub fn symbolic(row: usize, col: usize) -> Self {
        GroupGenerator::new(row, col, Polynomial::var(VariableId::Param(0)))
    }

    /// Generator with the symbolic parameter t_k.
    pub fn symbolic_k(row: usize, col: usize, k: u32) -> Self {
        GroupGenerator::new(row, col, Polynomial::var(VariableId::Param(k)))
    }

    pub fn rational(row: usize, col: usize, value: BigRational) -> Self {
        GroupGenerator::new(row, col, Polynomial::constant(value))
    }

    pub fn root(&self) -> Root {
        Root::new(self.row, self.col)
    }

    pub fn inverse(&self) -> Self {
        GroupGenerator {
            row: self.row,
            col: self.col,
            parameter: -&self.parameter,
        }
    }
}

/// n x n matrix of polynomials supported on the nilradical cells.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalMatrix {
    comp: Composition,
    entries: Vec<Vec<Polynomial>>,
}

impl FormalMatrix {
    /// The generic matrix: variable x_{i,j} at every nilradical cell, zero
    /// elsewhere.
    pub fn generic(comp: &Composition) -> FormalMatrix {
        let n = comp.n();
        let mut entries = vec![vec![Polynomial::zero(); n]; n];
        for r in comp.nilradical_roots() {
            entries[r.i - 1][r.j - 1] = Polynomial::var(VariableId::Matrix(r));
        }
        FormalMatrix {
            comp: comp.clone(),
            entries,
        }
    }

    pub fn composition(&self) -> &Composition {
        &self.comp
    }

    /// Entry at 1-based position (i, j).
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i - 1][j - 1]
    }

    /// Conjugate by a one-parameter generator, checking that the result
    /// stays supported on the nilradical.
    pub fn conjugate(&self, g: &GroupGenerator) -> Result<FormalMatrix, CoreError> {
        let n = self.comp.n();
        let (u, v) = (g.row, g.col);
        assert!(v <= n, "generator column exceeds matrix size");
        let t = &g.parameter;
        let mut entries = self.entries.clone();
        // X + t E X - t X E - t^2 E X E, with (E X)[a][b] = [a=u] X[v][b],
        // (X E)[a][b] = [b=v] X[a][u], (E X E)[a][b] = [a=u][b=v] X[v][u].
        for b in 0..n {
            let add = t * &self.entries[v - 1][b];
            entries[u - 1][b] = &entries[u - 1][b] + &add;
        }
        for a in 0..n {
            let sub = t * &self.entries[a][u - 1];
            entries[a][v - 1] = &entries[a][v - 1] - &sub;
        }
        let corner = &(t * t) * &self.entries[v - 1][u - 1];
        entries[u - 1][v - 1] = &entries[u - 1][v - 1] - &corner;

        let out = FormalMatrix {
            comp: self.comp.clone(),
            entries,
        };
        out.check_support()?;
        Ok(out)
    }

    fn check_support(&self) -> Result<(), CoreError> {
        let m = self.comp.nilradical_roots();
        for i in 1..=self.comp.n() {
            for j in 1..=self.comp.n() {
                let in_m = i < j && m.contains(&Root::new(i, j));
                if !in_m && !self.entry(i, j).is_zero() {
                    return Err(CoreError::LeavesNilradical { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// Act on a polynomial in the matrix variables: substitute every variable
/// by the matching entry of the conjugated generic matrix. Only variables
/// actually moved by the generator enter the substitution map.
pub fn act_on_polynomial(
    comp: &Composition,
    f: &Polynomial,
    g: &GroupGenerator,
) -> Result<Polynomial, CoreError> {
    let conj = FormalMatrix::generic(comp).conjugate(g)?;
    let mut map = BTreeMap::new();
    for v in f.support() {
        if let VariableId::Matrix(r) = v {
            let entry = conj.entry(r.i, r.j);
            if entry != &Polynomial::var(v) {
                map.insert(v, entry.clone());
            }
        }
    }
    Ok(f.substitute(&map))
}

/// Apply a word of generators left to right.
pub fn act_word_on_polynomial(
    comp: &Composition,
    f: &Polynomial,
    word: &[GroupGenerator],
) -> Result<Polynomial, CoreError> {
    let mut out = f.clone();
    for g in word {
        out = act_on_polynomial(comp, &out, g)?;
    }
    Ok(out)
}

/// Exact rational point of the nilradical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn zero(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![vec![BigRational::zero(); n]; n],
        }
    }

    /// Build from root coordinates; everything else is zero.
    pub fn from_coords(n: usize, coords: &BTreeMap<Root, BigRational>) -> Self {
        let mut m = RationalMatrix::zero(n);
        for (r, c) in coords {
            m.entries[r.i - 1][r.j - 1] = c.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i - 1][j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i - 1][j - 1] = v;
    }

    /// Check the support lies inside the nilradical of `comp`.
    pub fn supported_on_nilradical(&self, comp: &Composition) -> Result<(), CoreError> {
        let m = comp.nilradical_roots();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let in_m = i < j && m.contains(&Root::new(i, j));
                if !in_m && !self.get(i, j).is_zero() {
                    return Err(CoreError::LeavesNilradical { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Evaluation point mapping each matrix variable of `comp` to the
    /// corresponding entry.
    pub fn as_point(&self, comp: &Composition) -> BTreeMap<VariableId, BigRational> {
        comp.nilradical_roots()
            .into_iter()
            .map(|r| (VariableId::Matrix(r), self.get(r.i, r.j).clone()))
            .collect()
    }

    /// JSON grid of "p/q" strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|row| {
                    Value::Array(row.iter().map(|c| Value::String(c.to_string())).collect())
                })
                .collect(),
        )
    }

    /// Load an n x n grid of "p/q" strings; entries outside the nilradical
    /// must be zero.
    pub fn from_json(comp: &Composition, v: &Value) -> Result<Self, CoreError> {
        let rows = v
            .as_array()
            .ok_or_else(|| CoreError::InvalidInput("matrix JSON must be an array".into()))?;
        let n = comp.n();
        if rows.len() != n {
            return Err(CoreError::InvalidInput(format!(
                "matrix has {} rows, expected {n}",
                rows.len()
            )));
        }
        let mut out = RationalMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            let cells = row
                .as_array()
                .ok_or_else(|| CoreError::InvalidInput("matrix row must be an array".into()))?;
            if cells.len() != n {
                return Err(CoreError::InvalidInput(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    cells.len()
                )));
            }
            for (j, cell) in cells.iter().enumerate() {
                let s = cell
                    .as_str()
                    .ok_or_else(|| CoreError::InvalidInput("matrix entry must be a string".into()))?;
                let q = BigRational::from_str(s)
                    .map_err(|_| CoreError::InvalidInput(format!("bad rational {s:?}")))?;
                out.entries[i][j] = q;
            }
        }
        out.supported_on_nilradical(comp)
            .map_err(|_| CoreError::InvalidInput("matrix has support outside the nilradical".into()))?;
        Ok(out)
    }
}

/// Exact conjugation of a rational point; the generator parameter must be
/// a constant.
pub fn act_on_point(
    comp: &Composition,
    x: &RationalMatrix,
    g: &GroupGenerator,
) -> Result<RationalMatrix, CoreError> {
    let t = g
        .parameter
        .as_constant()
        .expect("act_on_point requires a rational generator parameter");
    let n = comp.n();
    assert_eq!(x.n(), n);
    let (u, v) = (g.row, g.col);
    let mut out = x.clone();
    for b in 1..=n {
        let add = &t * x.get(v, b);
        out.set(u, b, out.get(u, b) + add);
    }
    for a in 1..=n {
        let sub = &t * x.get(a, u);
        out.set(a, v, out.get(a, v) - sub);
    }
    let corner = &(&t * &t) * x.get(v, u);
    out.set(u, v, out.get(u, v) - corner);
    out.supported_on_nilradical(comp)?;
    Ok(out)
}

/// Apply a word of rational generators left to right.
pub fn act_word_on_point(
    comp: &Composition,
    x: &RationalMatrix,
    word: &[GroupGenerator],
) -> Result<RationalMatrix, CoreError> {
    let mut out = x.clone();
    for g in word {
        out = act_on_point(comp, &out, g)?;
    }
    Ok(out)
}
