//! Graded-commutative differential algebras in bounded degree.
//!
//! An [`Algebra`] is an immutable handle holding a per-degree basis, the full
//! multiplication table between basis elements and the differential matrices.
//! Two presentations produce handles:
//!
//! * [`build_free_cdga`]: the free graded-commutative algebra on a set of
//!   generators, truncated at a degree bound. Nothing above the bound is
//!   representable, so operations that would need it fail with
//!   [`Error::DegreeOverflow`].
//! * [`build_sc_algebra`]: a finite-dimensional algebra given by structure
//!   constants. Everything above its degree bound is zero.
//!
//! [`hirsch_extend`] adjoins an odd generator `z` with `dz` a closed element of
//! the base.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use num::{One, Zero};

use crate::cohomology::DegreeCohomology;
use crate::error::{Error, Result};
use crate::expr::{is_identifier, Expr, Term};
use crate::linalg::{is_zero_vec, zero_vec, Matrix, Rational};

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
        }
    }
}

/// Exponent vector over the generators of a free algebra, in canonical
/// generator order. Odd generators have exponent 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn name(&self, generators: &[GeneratorSpec]) -> String {
        let factors: Vec<String> = self
            .0
            .iter()
            .zip(generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    /// Whether any generator in `subset` (indices) divides this monomial.
    pub fn meets(&self, subset: &[usize]) -> bool {
        subset.iter().any(|&i| self.0[i] > 0)
    }
}

#[derive(Clone, Debug)]
pub struct FreeData {
    /// Generators sorted by (degree, declaration index).
    pub generators: Vec<GeneratorSpec>,
    /// Monomial basis per degree, aligned with the algebra's basis.
    pub monomials: Vec<Vec<Monomial>>,
    /// Differential of each generator, aligned with `generators`.
    pub differential: Vec<Expr>,
}

#[derive(Clone, Debug)]
pub enum Presentation {
    StructureConstants,
    Free(FreeData),
}

pub(crate) struct AlgebraData {
    id: u64,
    label: String,
    bound: usize,
    vanishes_above_bound: bool,
    basis: Vec<Vec<String>>,
    index: HashMap<String, (usize, usize)>,
    unit: usize,
    /// `products[i][j][p * dim_j + q]` holds the coordinates of `e_p * e_q` in
    /// degree `i + j`, for `i + j <= bound`.
    products: Vec<Vec<Vec<Vec<Rational>>>>,
    /// `differential[k]` maps degree `k` to `k + 1`. It is `None` only for the
    /// top degree of a truncated algebra.
    differential: Vec<Option<Matrix>>,
    presentation: Presentation,
    pub(crate) cohomology_cache: Vec<OnceLock<Arc<DegreeCohomology>>>,
}

/// Immutable, cheaply clonable handle to a validated algebra.
#[derive(Clone)]
pub struct Algebra(Arc<AlgebraData>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dims {:?})", self.0.label, self.dims())
    }
}

struct Tables {
    label: String,
    bound: usize,
    vanishes_above_bound: bool,
    basis: Vec<Vec<String>>,
    unit: usize,
    products: Vec<Vec<Vec<Vec<Rational>>>>,
    differential: Vec<Option<Matrix>>,
    presentation: Presentation,
}

impl Algebra {
    fn assemble(t: Tables) -> Algebra {
        let mut index = HashMap::new();
        for (k, names) in t.basis.iter().enumerate() {
            for (i, n) in names.iter().enumerate() {
                index.insert(n.clone(), (k, i));
            }
        }
        let cache = (0..=t.bound).map(|_| OnceLock::new()).collect();
        Algebra(Arc::new(AlgebraData {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            label: t.label,
            bound: t.bound,
            vanishes_above_bound: t.vanishes_above_bound,
            basis: t.basis,
            index,
            unit: t.unit,
            products: t.products,
            differential: t.differential,
            presentation: t.presentation,
            cohomology_cache: cache,
        }))
    }

    pub(crate) fn data(&self) -> &AlgebraData {
        &self.0
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn degree_bound(&self) -> usize {
        self.0.bound
    }

    /// True for structure-constant algebras, which are zero above the bound.
    /// False for truncated free algebras.
    pub fn vanishes_above_bound(&self) -> bool {
        self.0.vanishes_above_bound
    }

    /// Highest degree whose cohomology can be computed. Truncated algebras
    /// lack the differential out of their top degree.
    pub fn top_analyzable_degree(&self) -> usize {
        if self.0.vanishes_above_bound {
            self.0.bound
        } else {
            self.0.bound.saturating_sub(1)
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.0.presentation
    }

    pub fn free_data(&self) -> Option<&FreeData> {
        match &self.0.presentation {
            Presentation::Free(f) => Some(f),
            Presentation::StructureConstants => None,
        }
    }

    pub fn basis(&self, degree: usize) -> &[String] {
        self.0.basis.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.0.bound).map(|k| self.dim(k)).collect()
    }

    pub fn unit_index(&self) -> usize {
        self.0.unit
    }

    pub fn unit_name(&self) -> &str {
        &self.0.basis[0][self.0.unit]
    }

    /// Degree and index of a named basis element.
    pub fn locate(&self, name: &str) -> Option<(usize, usize)> {
        self.0.index.get(name).copied()
    }

    pub fn cochain(&self, degree: usize, coords: Vec<Rational>) -> Result<Cochain> {
        self.check_degree(degree)?;
        if coords.len() != self.dim(degree) {
            return Err(Error::CoordinateLength {
                degree,
                expected: self.dim(degree),
                found: coords.len(),
            });
        }
        Ok(Cochain {
            algebra: self.clone(),
            degree,
            coords,
        })
    }

    pub fn zero_cochain(&self, degree: usize) -> Result<Cochain> {
        self.cochain(degree, zero_vec(self.dim(degree)))
    }

    pub fn basis_element(&self, degree: usize, index: usize) -> Cochain {
        let mut coords = zero_vec(self.dim(degree));
        coords[index] = Rational::one();
        Cochain {
            algebra: self.clone(),
            degree,
            coords,
        }
    }

    pub fn basis_cochain(&self, name: &str) -> Result<Cochain> {
        let (k, i) = self
            .locate(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(self.basis_element(k, i))
    }

    pub fn unit_cochain(&self) -> Cochain {
        self.basis_element(0, self.0.unit)
    }

    /// Evaluates an expression written over this algebra's basis names.
    pub fn parse_cochain(&self, src: &str) -> Result<Cochain> {
        Expr::parse(src)?.evaluate(self, None)
    }

    /// Coordinates of `e_p * e_q` for basis elements in degrees `i` and `j`.
    pub fn basis_product(&self, i: usize, p: usize, j: usize, q: usize) -> Result<&[Rational]> {
        self.check_degree(i + j)?;
        Ok(&self.0.products[i][j][p * self.dim(j) + q])
    }

    pub fn multiply(&self, u: &Cochain, v: &Cochain) -> Result<Cochain> {
        if !u.algebra.same_as(self) || !v.algebra.same_as(self) {
            return Err(Error::AlgebraMismatch);
        }
        let degree = u.degree + v.degree;
        self.check_degree(degree)?;
        let block = &self.0.products[u.degree][v.degree];
        let dim_v = self.dim(v.degree);
        let mut out = zero_vec(self.dim(degree));
        for (p, a) in u.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (q, b) in v.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (r, c) in block[p * dim_v + q].iter().enumerate() {
                    if !c.is_zero() {
                        out[r] += &ab * c;
                    }
                }
            }
        }
        Ok(Cochain {
            algebra: self.clone(),
            degree,
            coords: out,
        })
    }

    /// Matrix of `d` from degree `k` to `k + 1`.
    pub fn differential_matrix(&self, k: usize) -> Result<&Matrix> {
        self.0
            .differential
            .get(k)
            .and_then(Option::as_ref)
            .ok_or(Error::DegreeOverflow {
                degree: k + 1,
                bound: self.0.bound,
            })
    }

    pub fn differentiate(&self, u: &Cochain) -> Result<Cochain> {
        if !u.algebra.same_as(self) {
            return Err(Error::AlgebraMismatch);
        }
        let m = self.differential_matrix(u.degree)?;
        Ok(Cochain {
            algebra: self.clone(),
            degree: u.degree + 1,
            coords: m.mul_vec(&u.coords),
        })
    }

    /// Same algebra with a larger degree bound; only for algebras that vanish
    /// above their bound, where the new degrees are empty.
    pub fn with_degree_bound(&self, bound: usize) -> Result<Algebra> {
        if !self.0.vanishes_above_bound || bound < self.0.bound {
            return Err(Error::DegreeOverflow {
                degree: bound,
                bound: self.0.bound,
            });
        }
        let mut basis = self.0.basis.clone();
        basis.resize(bound + 1, Vec::new());
        let mut products = self.0.products.clone();
        for i in 0..=bound {
            if i >= products.len() {
                products.push(Vec::new());
            }
            for j in products[i].len()..=(bound - i) {
                let cell = vec![zero_vec(basis[i + j].len()); basis[i].len() * basis[j].len()];
                products[i].push(cell);
            }
        }
        let differential = (0..=bound)
            .map(|k| {
                let target = if k < bound { basis[k + 1].len() } else { 0 };
                Some(match self.0.differential.get(k) {
                    Some(Some(m)) if m.rows() == target => m.clone(),
                    _ => Matrix::zeros(target, basis[k].len()),
                })
            })
            .collect();
        Ok(Algebra::assemble(Tables {
            label: self.0.label.clone(),
            bound,
            vanishes_above_bound: true,
            basis,
            unit: self.0.unit,
            products,
            differential,
            presentation: self.0.presentation.clone(),
        }))
    }

    /// Same tables under a different label (fresh handle).
    pub fn relabel(&self, label: impl Into<String>) -> Algebra {
        Algebra::assemble(Tables {
            label: label.into(),
            bound: self.0.bound,
            vanishes_above_bound: self.0.vanishes_above_bound,
            basis: self.0.basis.clone(),
            unit: self.0.unit,
            products: self.0.products.clone(),
            differential: self.0.differential.clone(),
            presentation: self.0.presentation.clone(),
        })
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree <= self.0.bound {
            Ok(())
        } else {
            Err(Error::DegreeOverflow {
                degree,
                bound: self.0.bound,
            })
        }
    }
}

/// A homogeneous element: coordinates over the basis of one degree.
#[derive(Clone)]
pub struct Cochain {
    algebra: Algebra,
    degree: usize,
    coords: Vec<Rational>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra)
            && self.degree == other.degree
            && self.coords == other.coords
    }
}

impl Eq for Cochain {}

impl Cochain {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if !self.algebra.same_as(&other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::NonHomogeneous {
                first: self.degree,
                second: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cochain {
            coords,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, by: &Rational) -> Cochain {
        Cochain {
            coords: self.coords.iter().map(|a| a * by).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Cochain) -> Result<Cochain> {
        self.algebra.multiply(self, other)
    }

    pub fn d(&self) -> Result<Cochain> {
        self.algebra.differentiate(self)
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.algebra.basis(self.degree);
        let unit = (self.degree == 0).then(|| self.algebra.unit_index());
        let terms = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(i, q)| Term {
                coeff: q.clone(),
                factors: if Some(i) == unit {
                    Vec::new()
                } else {
                    vec![(names[i].clone(), 1)]
                },
            })
            .collect();
        write!(f, "{}", Expr { terms })
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(deg {}: {})", self.degree, self)
    }
}

fn koszul_sign(a: usize, b: usize) -> Rational {
    if a % 2 == 1 && b % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn empty_products(basis: &[Vec<String>], bound: usize) -> Vec<Vec<Vec<Vec<Rational>>>> {
    (0..=bound)
        .map(|i| {
            (0..=bound - i)
                .map(|j| vec![zero_vec(basis[i + j].len()); basis[i].len() * basis[j].len()])
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Free CDGAs

fn enumerate_monomials(generators: &[GeneratorSpec], degree: usize) -> Vec<Monomial> {
    fn go(
        gens: &[GeneratorSpec],
        at: usize,
        remaining: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if at == gens.len() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let deg = gens[at].degree;
        let max = if deg % 2 == 1 {
            usize::from(remaining >= deg)
        } else {
            remaining / deg
        };
        for e in (0..=max).rev() {
            current.push(e as u32);
            go(gens, at + 1, remaining - e * deg, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(generators, 0, degree, &mut Vec::new(), &mut out);
    out
}

/// Product of two monomials with its Koszul sign, or `None` if an odd
/// generator would be squared.
fn monomial_product(
    generators: &[GeneratorSpec],
    a: &Monomial,
    b: &Monomial,
) -> Option<(Monomial, bool)> {
    let odd = |i: usize| generators[i].degree % 2 == 1;
    let mut swaps = 0usize;
    let mut exps = Vec::with_capacity(a.0.len());
    for i in 0..a.0.len() {
        let e = a.0[i] + b.0[i];
        if odd(i) && e > 1 {
            return None;
        }
        exps.push(e);
        if odd(i) && a.0[i] == 1 {
            // odd factors of `b` that must move left past this factor of `a`
            swaps += (0..i).filter(|&j| odd(j) && b.0[j] == 1).count();
        }
    }
    Some((Monomial(exps), swaps % 2 == 1))
}

/// Builds the free graded-commutative algebra on `generators`, truncated at
/// `degree_bound`, with `d` given on generators and extended by the Leibniz
/// rule. Generators missing from `differential` are closed.
pub fn build_free_cdga(
    generators: &[GeneratorSpec],
    differential: &BTreeMap<String, Expr>,
    degree_bound: usize,
) -> Result<Algebra> {
    let mut seen = HashSet::new();
    for g in generators {
        if !is_identifier(&g.name) {
            return Err(Error::InvalidName(g.name.clone()));
        }
        if !seen.insert(g.name.as_str()) {
            return Err(Error::DuplicateName(g.name.clone()));
        }
        if g.degree == 0 {
            return Err(Error::InvalidGeneratorDegree {
                name: g.name.clone(),
                degree: 0,
            });
        }
    }
    for name in differential.keys() {
        if !seen.contains(name.as_str()) {
            return Err(Error::UnknownName(name.clone()));
        }
    }
    let mut gens = generators.to_vec();
    gens.sort_by_key(|g| g.degree);

    let monomials: Vec<Vec<Monomial>> = (0..=degree_bound)
        .map(|k| enumerate_monomials(&gens, k))
        .collect();
    let basis: Vec<Vec<String>> = monomials
        .iter()
        .map(|ms| ms.iter().map(|m| m.name(&gens)).collect())
        .collect();
    let lookup: Vec<HashMap<&Monomial, usize>> = monomials
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();

    let mut products = empty_products(&basis, degree_bound);
    for i in 0..=degree_bound {
        for j in 0..=degree_bound - i {
            let dim_j = monomials[j].len();
            for (p, a) in monomials[i].iter().enumerate() {
                for (q, b) in monomials[j].iter().enumerate() {
                    if let Some((m, negative)) = monomial_product(&gens, a, b) {
                        let r = lookup[i + j][&m];
                        products[i][j][p * dim_j + q][r] = if negative {
                            -Rational::one()
                        } else {
                            Rational::one()
                        };
                    }
                }
            }
        }
    }

    // Scaffold with d = 0, used to evaluate the generator differentials.
    let scaffold_diff = (0..=degree_bound)
        .map(|k| (k < degree_bound).then(|| Matrix::zeros(basis[k + 1].len(), basis[k].len())))
        .collect();
    let scaffold = Algebra::assemble(Tables {
        label: String::new(),
        bound: degree_bound,
        vanishes_above_bound: false,
        basis: basis.clone(),
        unit: 0,
        products: products.clone(),
        differential: scaffold_diff,
        presentation: Presentation::StructureConstants,
    });

    let mut gen_d: Vec<Option<Cochain>> = Vec::with_capacity(gens.len());
    let mut gen_exprs = Vec::with_capacity(gens.len());
    for g in &gens {
        let expr = differential.get(&g.name).cloned().unwrap_or_default();
        let target = g.degree + 1;
        if target > degree_bound {
            if !expr.terms.is_empty() {
                return Err(Error::DegreeOverflow {
                    degree: target,
                    bound: degree_bound,
                });
            }
            gen_d.push(None);
        } else {
            let value = expr
                .evaluate(&scaffold, Some(target))
                .map_err(|e| match e {
                    Error::NonHomogeneous { second, .. } => Error::WrongDifferentialDegree {
                        generator: g.name.clone(),
                        expected: target,
                        found: second,
                    },
                    other => other,
                })?;
            gen_d.push(Some(value));
        }
        gen_exprs.push(expr);
    }

    // d(g * rest) = dg * rest + (-1)^|g| g * d(rest), with g the first factor.
    let mut d_of: Vec<Vec<Vec<Rational>>> = Vec::new();
    for k in 0..degree_bound {
        let mut column = Vec::with_capacity(monomials[k].len());
        for m in &monomials[k] {
            let Some(first) = m.0.iter().position(|&e| e > 0) else {
                column.push(zero_vec(basis[k + 1].len()));
                continue;
            };
            let g = &gens[first];
            let mut rest = m.clone();
            rest.0[first] -= 1;
            let rest_deg = k - g.degree;
            let rest_idx = lookup[rest_deg][&rest];
            let rest_c = scaffold.basis_element(rest_deg, rest_idx);
            let g_c = scaffold.basis_element(
                g.degree,
                lookup[g.degree][&{
                    let mut e = vec![0; gens.len()];
                    e[first] = 1;
                    Monomial(e)
                }],
            );
            let mut value = zero_vec(basis[k + 1].len());
            if let Some(dg) = &gen_d[first] {
                value = scaffold.multiply(dg, &rest_c)?.coords;
            }
            if rest_deg > 0 {
                let d_rest = scaffold.cochain(rest_deg + 1, d_of[rest_deg][rest_idx].clone())?;
                let term = scaffold.multiply(&g_c, &d_rest)?;
                let sign = koszul_sign(g.degree, 1);
                for (v, t) in value.iter_mut().zip(term.coords) {
                    *v += &sign * t;
                }
            }
            column.push(value);
        }
        d_of.push(column);
    }
    let mut diff_matrices: Vec<Option<Matrix>> = d_of
        .iter()
        .enumerate()
        .map(|(k, cols)| Some(columns_to_matrix(basis[k + 1].len(), cols)))
        .collect();
    diff_matrices.push(None);

    for k in 0..degree_bound.saturating_sub(1) {
        let dd = diff_matrices[k + 1]
            .as_ref()
            .unwrap()
            .mul(diff_matrices[k].as_ref().unwrap());
        if let Some(col) = (0..dd.cols()).find(|&c| !is_zero_vec(&dd.column(c))) {
            return Err(Error::DSquaredNonzero(basis[k][col].clone()));
        }
    }

    let label = format!(
        "free({})",
        gens.iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(Algebra::assemble(Tables {
        label,
        bound: degree_bound,
        vanishes_above_bound: false,
        basis,
        unit: 0,
        products,
        differential: diff_matrices,
        presentation: Presentation::Free(FreeData {
            generators: gens,
            monomials,
            differential: gen_exprs,
        }),
    }))
}

fn columns_to_matrix(rows: usize, columns: &[Vec<Rational>]) -> Matrix {
    let mut m = Matrix::zeros(rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Structure-constant algebras

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<(String, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialEntry {
    pub on: String,
    pub result: Vec<(String, Rational)>,
}

/// Finite-dimensional algebra given by its multiplication table.
///
/// Every pair of basis elements whose degrees sum to at most the bound needs
/// a product entry (an empty result means zero); pairs involving the unit may
/// be omitted. Pairs landing above the bound must be absent or zero.
/// Differential entries default to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScPresentation {
    pub label: String,
    pub degree_bound: usize,
    pub basis: Vec<Vec<String>>,
    pub unit: String,
    pub products: Vec<ProductEntry>,
    pub differential: Vec<DifferentialEntry>,
}

fn is_basis_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, b'_' | b'*' | b'^'))
}

impl ScPresentation {
    /// Builds the tables without checking the algebra axioms. Use
    /// [`build_sc_algebra`] unless the point is to inspect a broken table
    /// with [`verify_axioms`].
    pub fn assemble_unchecked(&self) -> Result<Algebra> {
        let bound = self.degree_bound;
        if self.basis.len() != bound + 1 {
            return Err(Error::BasisShape {
                bound,
                found: self.basis.len(),
            });
        }
        let mut index: HashMap<&str, (usize, usize)> = HashMap::new();
        for (k, names) in self.basis.iter().enumerate() {
            for (i, n) in names.iter().enumerate() {
                if !is_basis_name(n) {
                    return Err(Error::InvalidName(n.clone()));
                }
                if index.insert(n.as_str(), (k, i)).is_some() {
                    return Err(Error::DuplicateName(n.clone()));
                }
            }
        }
        let unit = match index.get(self.unit.as_str()) {
            Some(&(0, i)) => i,
            _ => return Err(Error::MissingUnit(self.unit.clone())),
        };
        let locate = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownName(name.to_string()))
        };
        let dim = |k: usize| self.basis.get(k).map_or(0, Vec::len);
        let read_result = |context: &str, degree: usize, result: &[(String, Rational)]| {
            let mut coords = zero_vec(dim(degree));
            for (name, coeff) in result {
                let (k, i) = locate(name)?;
                if k != degree {
                    return Err(Error::WrongEntryDegree {
                        context: context.to_string(),
                        basis: name.clone(),
                        expected: degree,
                        found: k,
                    });
                }
                coords[i] += coeff;
            }
            Ok(coords)
        };

        let mut products = empty_products(&self.basis, bound);
        let mut given = HashSet::new();
        for entry in &self.products {
            let (i, p) = locate(&entry.left)?;
            let (j, q) = locate(&entry.right)?;
            if !given.insert((i, p, j, q)) {
                return Err(Error::DuplicateProduct {
                    left: entry.left.clone(),
                    right: entry.right.clone(),
                });
            }
            let context = format!("{}*{}", entry.left, entry.right);
            if i + j > bound {
                if entry.result.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(Error::ProductAboveBound {
                        left: entry.left.clone(),
                        right: entry.right.clone(),
                        degree: i + j,
                    });
                }
                continue;
            }
            products[i][j][p * dim(j) + q] = read_result(&context, i + j, &entry.result)?;
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..=bound {
            for j in 0..=bound - i {
                for p in 0..dim(i) {
                    for q in 0..dim(j) {
                        if given.contains(&(i, p, j, q)) {
                            continue;
                        }
                        if i == 0 && p == unit {
                            products[i][j][p * dim(j) + q][q] = Rational::one();
                        } else if j == 0 && q == unit {
                            products[i][j][p * dim(j) + q][p] = Rational::one();
                        } else {
                            return Err(Error::MissingProduct {
                                left: self.basis[i][p].clone(),
                                right: self.basis[j][q].clone(),
                            });
                        }
                    }
                }
            }
        }

        let mut differential: Vec<Matrix> = (0..=bound)
            .map(|k| Matrix::zeros(dim(k + 1), dim(k)))
            .collect();
        for entry in &self.differential {
            let (k, i) = locate(&entry.on)?;
            let context = format!("d({})", entry.on);
            if k == bound {
                if entry.result.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(Error::DegreeOverflow {
                        degree: k + 1,
                        bound,
                    });
                }
                continue;
            }
            let coords = read_result(&context, k + 1, &entry.result)?;
            for (r, c) in coords.into_iter().enumerate() {
                differential[k][(r, i)] = c;
            }
        }

        Ok(Algebra::assemble(Tables {
            label: self.label.clone(),
            bound,
            vanishes_above_bound: true,
            basis: self.basis.clone(),
            unit,
            products,
            differential: differential.into_iter().map(Some).collect(),
            presentation: Presentation::StructureConstants,
        }))
    }
}

/// Builds a structure-constant algebra and checks every axiom exhaustively.
pub fn build_sc_algebra(spec: &ScPresentation) -> Result<Algebra> {
    let algebra = spec.assemble_unchecked()?;
    let report = verify_axioms(&algebra);
    if report.violations.is_empty() {
        Ok(algebra)
    } else {
        Err(Error::Axioms(report.violations))
    }
}

/// Writes any algebra back out as a structure-constant presentation. Pairs
/// above the bound are left out.
pub fn to_sc_presentation(algebra: &Algebra) -> ScPresentation {
    let bound = algebra.degree_bound();
    let named = |degree: usize, coords: &[Rational]| -> Vec<(String, Rational)> {
        coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (algebra.basis(degree)[i].clone(), c.clone()))
            .collect()
    };
    let mut products = Vec::new();
    for i in 0..=bound {
        for j in 0..=bound - i {
            for p in 0..algebra.dim(i) {
                for q in 0..algebra.dim(j) {
                    let coords = algebra.basis_product(i, p, j, q).expect("in range");
                    products.push(ProductEntry {
                        left: algebra.basis(i)[p].clone(),
                        right: algebra.basis(j)[q].clone(),
                        result: named(i + j, coords),
                    });
                }
            }
        }
    }
    let mut differential = Vec::new();
    for k in 0..=bound {
        let Ok(m) = algebra.differential_matrix(k) else {
            continue;
        };
        for i in 0..algebra.dim(k) {
            let result = named(k + 1, &m.column(i));
            if !result.is_empty() {
                differential.push(DifferentialEntry {
                    on: algebra.basis(k)[i].clone(),
                    result,
                });
            }
        }
    }
    ScPresentation {
        label: algebra.label().to_string(),
        degree_bound: bound,
        basis: (0..=bound).map(|k| algebra.basis(k).to_vec()).collect(),
        unit: algebra.unit_name().to_string(),
        products,
        differential,
    }
}

// ---------------------------------------------------------------------------
// Hirsch extensions

#[derive(Clone, Debug)]
pub struct HirschExtensionSpec {
    pub base: Algebra,
    pub generator: GeneratorSpec,
    pub euler_cocycle: Cochain,
}

/// Adjoins an odd generator `z` with `dz = euler_cocycle`.
///
/// For a structure-constant base the new basis in degree `k` is
/// `base_k` followed by `base_{k-n} * z`, and the bound grows by `n = |z|`.
/// A free base is rebuilt as a free algebra with one more generator and keeps
/// its bound.
pub fn hirsch_extend(spec: &HirschExtensionSpec) -> Result<Algebra> {
    let base = &spec.base;
    let z = &spec.generator;
    let n = z.degree;
    if n.is_multiple_of(2) {
        return Err(Error::EvenHirschGenerator {
            name: z.name.clone(),
            degree: n,
        });
    }
    if !is_identifier(&z.name) {
        return Err(Error::InvalidName(z.name.clone()));
    }
    if !spec.euler_cocycle.algebra().same_as(base) {
        return Err(Error::AlgebraMismatch);
    }
    if spec.euler_cocycle.degree() != n + 1 {
        return Err(Error::WrongDifferentialDegree {
            generator: z.name.clone(),
            expected: n + 1,
            found: spec.euler_cocycle.degree(),
        });
    }
    if base.locate(&z.name).is_some() {
        return Err(Error::DuplicateName(z.name.clone()));
    }
    let closed = if n + 1 == base.degree_bound() && base.vanishes_above_bound() {
        true
    } else {
        base.differentiate(&spec.euler_cocycle)?.is_zero()
    };
    if !closed {
        return Err(Error::EulerNotClosed);
    }

    if let Some(free) = base.free_data() {
        let mut gens = free.generators.clone();
        gens.push(z.clone());
        let mut diffs: BTreeMap<String, Expr> = free
            .generators
            .iter()
            .zip(&free.differential)
            .map(|(g, e)| (g.name.clone(), e.clone()))
            .collect();
        diffs.insert(z.name.clone(), Expr::from_cochain(&spec.euler_cocycle));
        return build_free_cdga(&gens, &diffs, base.degree_bound());
    }

    let base_bound = base.degree_bound();
    let bound = base_bound + n;
    let base_dim = |k: usize| if k <= base_bound { base.dim(k) } else { 0 };
    let mut basis: Vec<Vec<String>> = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let mut names: Vec<String> = if k <= base_bound {
            base.basis(k).to_vec()
        } else {
            Vec::new()
        };
        if k >= n {
            for (i, b) in base.basis(k - n).iter().enumerate() {
                if k == n && i == base.unit_index() {
                    names.push(z.name.clone());
                } else {
                    names.push(format!("{b}*{}", z.name));
                }
            }
        }
        basis.push(names);
    }
    // Position of base element (k, i) and of (k, i) * z in the new basis.
    let plain = |_k: usize, i: usize| i;
    let with_z = |k: usize, i: usize| base_dim(k + n) + i;
    // Base product coordinates, zero above the base bound.
    let base_prod = |i: usize, p: usize, j: usize, q: usize| -> Option<&[Rational]> {
        (i + j <= base_bound).then(|| base.basis_product(i, p, j, q).expect("in range"))
    };

    let mut products = empty_products(&basis, bound);
    for i in 0..=bound {
        for j in 0..=bound - i {
            let dim_j = basis[j].len();
            let t = i + j;
            for p in 0..basis[i].len() {
                for q in 0..dim_j {
                    let out = &mut products[i][j][p * dim_j + q];
                    let (p_has_z, p_base_deg, p_idx) = split(i, p, n, base_dim);
                    let (q_has_z, q_base_deg, q_idx) = split(j, q, n, base_dim);
                    match (p_has_z, q_has_z) {
                        (true, true) => {}
                        (false, false) => {
                            if let Some(c) = base_prod(i, p_idx, j, q_idx) {
                                for (r, v) in c.iter().enumerate() {
                                    out[plain(t, r)] = v.clone();
                                }
                            }
                        }
                        (false, true) => {
                            if let Some(c) = base_prod(i, p_idx, q_base_deg, q_idx) {
                                for (r, v) in c.iter().enumerate() {
                                    out[with_z(i + q_base_deg, r)] = v.clone();
                                }
                            }
                        }
                        (true, false) => {
                            // (a z) b = (-1)^{n|b|} (a b) z
                            let sign = koszul_sign(n, j);
                            if let Some(c) = base_prod(p_base_deg, p_idx, j, q_idx) {
                                for (r, v) in c.iter().enumerate() {
                                    out[with_z(p_base_deg + j, r)] = &sign * v;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let euler = spec.euler_cocycle.coords();
    let mut differential = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let rows = if k < bound { basis[k + 1].len() } else { 0 };
        let mut m = Matrix::zeros(rows, basis[k].len());
        if k < bound {
            for col in 0..basis[k].len() {
                let (has_z, base_deg, idx) = split(k, col, n, base_dim);
                if !has_z {
                    if k < base_bound {
                        let d = base.differential_matrix(k)?;
                        for r in 0..d.rows() {
                            m[(plain(k + 1, r), col)] = d[(r, idx)].clone();
                        }
                    }
                    continue;
                }
                // d(b z) = (db) z + (-1)^{|b|} b e
                if base_deg < base_bound {
                    let d = base.differential_matrix(base_deg)?;
                    for r in 0..d.rows() {
                        m[(with_z(base_deg + 1, r), col)] = d[(r, idx)].clone();
                    }
                }
                if base_deg + n < base_bound {
                    let sign = koszul_sign(base_deg, 1);
                    let dim_e = base.dim(n + 1);
                    for (s, e) in euler.iter().enumerate().take(dim_e) {
                        if e.is_zero() {
                            continue;
                        }
                        let c = base_prod(base_deg, idx, n + 1, s).expect("in range");
                        for (r, v) in c.iter().enumerate() {
                            m[(plain(k + 1, r), col)] += &sign * e * v;
                        }
                    }
                }
            }
        }
        differential.push(Some(m));
    }

    Ok(Algebra::assemble(Tables {
        label: format!("{} (x) L({}:{})", base.label(), z.name, n),
        bound,
        vanishes_above_bound: true,
        basis,
        unit: base.unit_index(),
        products,
        differential,
        presentation: Presentation::StructureConstants,
    }))
}

/// Splits a position of the extended basis in degree `k` into
/// (carries z, base degree, base index).
fn split(
    k: usize,
    pos: usize,
    n: usize,
    base_dim: impl Fn(usize) -> usize,
) -> (bool, usize, usize) {
    let plain = base_dim(k);
    if pos < plain {
        (false, k, pos)
    } else {
        (true, k - n, pos - plain)
    }
}

// ---------------------------------------------------------------------------
// Axiom verification

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Unit {
        element: String,
    },
    Commutativity {
        left: String,
        right: String,
    },
    Associativity {
        first: String,
        second: String,
        third: String,
    },
    Leibniz {
        left: String,
        right: String,
    },
    DSquared {
        element: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unit { element } => write!(f, "unit does not act as identity on {element}"),
            Violation::Commutativity { left, right } => {
                write!(f, "graded commutativity fails for ({left}, {right})")
            }
            Violation::Associativity {
                first,
                second,
                third,
            } => write!(f, "associativity fails for ({first}, {second}, {third})"),
            Violation::Leibniz { left, right } => {
                write!(f, "Leibniz rule fails for ({left}, {right})")
            }
            Violation::DSquared { element } => write!(f, "d^2 is nonzero on {element}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of unit, graded commutativity, associativity, Leibniz
/// and `d^2 = 0` over all basis pairs and triples within the degree bound.
pub fn verify_axioms(algebra: &Algebra) -> AxiomReport {
    let bound = algebra.degree_bound();
    let name = |k: usize, i: usize| algebra.basis(k)[i].clone();
    let prod = |i, p, j, q| algebra.basis_product(i, p, j, q).expect("in range");
    let mut violations = Vec::new();

    let unit = algebra.unit_index();
    for k in 0..=bound {
        for i in 0..algebra.dim(k) {
            let mut e = zero_vec(algebra.dim(k));
            e[i] = Rational::one();
            if prod(0, unit, k, i) != e.as_slice() || prod(k, i, 0, unit) != e.as_slice() {
                violations.push(Violation::Unit {
                    element: name(k, i),
                });
            }
        }
    }

    for i in 0..=bound {
        for j in i..=bound - i {
            let sign = koszul_sign(i, j);
            for p in 0..algebra.dim(i) {
                let start = if i == j { p } else { 0 };
                for q in start..algebra.dim(j) {
                    let ab = prod(i, p, j, q);
                    let ba = prod(j, q, i, p);
                    if ab.iter().zip(ba).any(|(x, y)| *x != &sign * y) {
                        violations.push(Violation::Commutativity {
                            left: name(i, p),
                            right: name(j, q),
                        });
                    }
                }
            }
        }
    }

    // (e_a e_b) e_c == e_a (e_b e_c)
    let times_right = |v: &[Rational], deg: usize, l: usize, c: usize| {
        let mut out = zero_vec(algebra.dim(deg + l));
        for (r, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (s, y) in prod(deg, r, l, c).iter().enumerate() {
                if !y.is_zero() {
                    out[s] += x * y;
                }
            }
        }
        out
    };
    let times_left = |i: usize, a: usize, v: &[Rational], deg: usize| {
        let mut out = zero_vec(algebra.dim(i + deg));
        for (r, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (s, y) in prod(i, a, deg, r).iter().enumerate() {
                if !y.is_zero() {
                    out[s] += x * y;
                }
            }
        }
        out
    };
    for i in 1..=bound {
        for j in 1..=bound - i {
            for l in 1..=bound - i - j {
                for a in 0..algebra.dim(i) {
                    for b in 0..algebra.dim(j) {
                        let ab = prod(i, a, j, b);
                        for c in 0..algebra.dim(l) {
                            let left = times_right(ab, i + j, l, c);
                            let right = times_left(i, a, prod(j, b, l, c), j + l);
                            if left != right {
                                violations.push(Violation::Associativity {
                                    first: name(i, a),
                                    second: name(j, b),
                                    third: name(l, c),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // Degree-0 elements other than the unit still need checking.
    for i in 0..=bound {
        for j in 0..=bound - i {
            for l in 0..=bound - i - j {
                if i > 0 && j > 0 && l > 0 {
                    continue;
                }
                for a in 0..algebra.dim(i) {
                    for b in 0..algebra.dim(j) {
                        for c in 0..algebra.dim(l) {
                            if (i == 0 && a == unit)
                                || (j == 0 && b == unit)
                                || (l == 0 && c == unit)
                            {
                                continue;
                            }
                            let left = times_right(prod(i, a, j, b), i + j, l, c);
                            let right = times_left(i, a, prod(j, b, l, c), j + l);
                            if left != right {
                                violations.push(Violation::Associativity {
                                    first: name(i, a),
                                    second: name(j, b),
                                    third: name(l, c),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // d(uv) = (du)v + (-1)^|u| u(dv)
    for i in 0..bound {
        for j in 0..bound - i {
            let (Ok(di), Ok(dj), Ok(dij)) = (
                algebra.differential_matrix(i),
                algebra.differential_matrix(j),
                algebra.differential_matrix(i + j),
            ) else {
                continue;
            };
            let sign = koszul_sign(i, 1);
            for p in 0..algebra.dim(i) {
                for q in 0..algebra.dim(j) {
                    let lhs = dij.mul_vec(prod(i, p, j, q));
                    let mut rhs = times_right(&di.column(p), i + 1, j, q);
                    let second = times_left(i, p, &dj.column(q), j + 1);
                    for (r, s) in rhs.iter_mut().zip(second) {
                        *r += &sign * s;
                    }
                    if lhs != rhs {
                        violations.push(Violation::Leibniz {
                            left: name(i, p),
                            right: name(j, q),
                        });
                    }
                }
            }
        }
    }

    for k in 0..bound {
        let (Ok(d0), Ok(d1)) = (
            algebra.differential_matrix(k),
            algebra.differential_matrix(k + 1),
        ) else {
            continue;
        };
        let dd = d1.mul(d0);
        for i in 0..dd.cols() {
            if !is_zero_vec(&dd.column(i)) {
                violations.push(Violation::DSquared {
                    element: name(k, i),
                });
            }
        }
    }

    AxiomReport { violations }
}
