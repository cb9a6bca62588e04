//! Built-in algebras: the cohomology of a four-dimensional quaternionic
//! Kähler orbifold and its `S^3`-bundle model, the cohomology of `CP^3`
//! blown up at `k` points and its circle-bundle model, plus Poincaré
//! pairings and their diagonalization.

use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::algebra::{
    build_sc_algebra, hirsch_extend, Algebra, GeneratorSpec, HirschExtensionSpec, ProductEntry,
    ScPresentation,
};
use crate::cohomology::{
    betti_vector, class_of, cohomology_basis, cup, right_multiplication_matrix,
};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, kernel_basis, rat, Matrix, Rational};

/// Sign in the top-degree relation of the blow-up ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelationSign {
    /// `a_i^3 = -b^3`.
    #[default]
    Negative,
    /// `a_i^3 = b^3`.
    Positive,
}

impl RelationSign {
    fn cube_coefficient(self) -> i64 {
        match self {
            RelationSign::Negative => -1,
            RelationSign::Positive => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationSign::Negative => "negative",
            RelationSign::Positive => "positive",
        }
    }
}

impl std::str::FromStr for RelationSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "negative" => Ok(RelationSign::Negative),
            "positive" => Ok(RelationSign::Positive),
            other => Err(Error::InvalidModel(format!(
                "relation sign must be `negative` or `positive`, got `{other}`"
            ))),
        }
    }
}

/// `H^2` of rank `k` with diagonal intersection form `a_i^2 = lambda_i Omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QkOrbifoldSpec {
    pub k: usize,
    pub lambdas: Vec<Rational>,
}

impl QkOrbifoldSpec {
    pub fn unit(k: usize) -> Self {
        QkOrbifoldSpec {
            k,
            lambdas: vec![Rational::one(); k],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidModel("k must be at least 1".into()));
        }
        if self.lambdas.len() != self.k {
            return Err(Error::InvalidModel(format!(
                "expected {} lambdas, got {}",
                self.k,
                self.lambdas.len()
            )));
        }
        if let Some(i) = self.lambdas.iter().position(Zero::is_zero) {
            return Err(Error::InvalidModel(format!("lambda_{} is zero", i + 1)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec {
    pub k: usize,
    pub relation_sign: RelationSign,
}

impl BlowupSpec {
    pub fn new(k: usize) -> Self {
        BlowupSpec {
            k,
            relation_sign: RelationSign::Negative,
        }
    }
}

/// Circle bundle over the blow-up with Euler class `ell b - sum a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleBundleSpec {
    pub k: usize,
    pub ell: u64,
    pub relation_sign: RelationSign,
}

impl CircleBundleSpec {
    pub fn new(k: usize, ell: u64) -> Self {
        CircleBundleSpec {
            k,
            ell,
            relation_sign: RelationSign::Negative,
        }
    }

    /// The Euler class as an expression over the blow-up ring.
    pub fn euler_expression(&self) -> String {
        let mut s = format!("{}*b", self.ell);
        for i in 1..=self.k {
            s.push_str(&format!(" - a{i}"));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    QkOrbifold(QkOrbifoldSpec),
    ThreeSasakian(QkOrbifoldSpec),
    Blowup(BlowupSpec),
    SasakiCircle(CircleBundleSpec),
}

impl ModelSpec {
    pub fn build(&self) -> Result<Algebra> {
        match self {
            ModelSpec::QkOrbifold(s) => qk_orbifold_algebra(s),
            ModelSpec::ThreeSasakian(s) => three_sasakian_model(s),
            ModelSpec::Blowup(s) => cp3_blowup_algebra(s),
            ModelSpec::SasakiCircle(s) => sasaki_circle_model(s),
        }
    }

    /// Dimension of the modeled space, i.e. the degree of the top class.
    pub fn formal_dimension(&self) -> usize {
        match self {
            ModelSpec::QkOrbifold(_) => 4,
            ModelSpec::Blowup(_) => 6,
            ModelSpec::ThreeSasakian(_) | ModelSpec::SasakiCircle(_) => 7,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::QkOrbifold(_) => "qk",
            ModelSpec::ThreeSasakian(_) => "three-sasakian",
            ModelSpec::Blowup(_) => "blowup",
            ModelSpec::SasakiCircle(_) => "sasaki-circle",
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lambdas = |l: &[Rational]| l.iter().map(format_rational).collect::<Vec<_>>().join(",");
        match self {
            ModelSpec::QkOrbifold(s) => write!(f, "qk(k={}, lambdas={})", s.k, lambdas(&s.lambdas)),
            ModelSpec::ThreeSasakian(s) => {
                write!(
                    f,
                    "three-sasakian(k={}, lambdas={})",
                    s.k,
                    lambdas(&s.lambdas)
                )
            }
            ModelSpec::Blowup(s) => {
                write!(
                    f,
                    "blowup(k={}, relation={})",
                    s.k,
                    s.relation_sign.as_str()
                )
            }
            ModelSpec::SasakiCircle(s) => write!(
                f,
                "sasaki-circle(k={}, l={}, relation={})",
                s.k,
                s.ell,
                s.relation_sign.as_str()
            ),
        }
    }
}

fn entry(left: &str, right: &str, result: Vec<(String, Rational)>) -> ProductEntry {
    ProductEntry {
        left: left.to_string(),
        right: right.to_string(),
        result,
    }
}

fn symmetric_entries(
    out: &mut Vec<ProductEntry>,
    a: &str,
    b: &str,
    result: Vec<(String, Rational)>,
) {
    out.push(entry(a, b, result.clone()));
    if a != b {
        out.push(entry(b, a, result));
    }
}

/// Basis `1 | a1..ak | Omega` in degrees 0, 2, 4 with zero differential.
pub fn qk_orbifold_algebra(spec: &QkOrbifoldSpec) -> Result<Algebra> {
    spec.validate()?;
    let a: Vec<String> = (1..=spec.k).map(|i| format!("a{i}")).collect();
    let mut products = Vec::new();
    for i in 0..spec.k {
        for j in i..spec.k {
            let result = if i == j {
                vec![("Omega".to_string(), spec.lambdas[i].clone())]
            } else {
                Vec::new()
            };
            symmetric_entries(&mut products, &a[i], &a[j], result);
        }
    }
    build_sc_algebra(&ScPresentation {
        label: ModelSpec::QkOrbifold(spec.clone()).to_string(),
        degree_bound: 4,
        basis: vec![vec!["1".into()], vec![], a, vec![], vec!["Omega".into()]],
        unit: "1".into(),
        products,
        differential: Vec::new(),
    })
}

/// `(H*(O) (x) L(z), dz = Omega)` with `|z| = 3`, degree bound 8.
pub fn three_sasakian_model(spec: &QkOrbifoldSpec) -> Result<Algebra> {
    let base = qk_orbifold_algebra(spec)?;
    let omega = base.basis_cochain("Omega")?;
    let ext = hirsch_extend(&HirschExtensionSpec {
        base,
        generator: GeneratorSpec::new("z", 3),
        euler_cocycle: omega,
    })?;
    Ok(ext
        .with_degree_bound(8)?
        .relabel(ModelSpec::ThreeSasakian(spec.clone()).to_string()))
}

/// Cohomology ring of `CP^3` blown up at `k` points: `b a_i = 0 = a_i a_j`,
/// `b^3` spans degree 6 and `a_i^3 = -b^3` (or `+b^3` with the positive sign).
pub fn cp3_blowup_algebra(spec: &BlowupSpec) -> Result<Algebra> {
    if spec.k == 0 {
        return Err(Error::InvalidModel("k must be at least 1".into()));
    }
    let k = spec.k;
    let deg2: Vec<String> = std::iter::once("b".to_string())
        .chain((1..=k).map(|i| format!("a{i}")))
        .collect();
    let deg4: Vec<String> = deg2.iter().map(|n| format!("{n}^2")).collect();
    let top = "b^3".to_string();
    // Only squares survive in degree 4, and only x * x^2 in degree 6.
    let cube = |i: usize| {
        if i == 0 {
            rat(1)
        } else {
            rat(spec.relation_sign.cube_coefficient())
        }
    };
    let mut products = Vec::new();
    for i in 0..=k {
        for j in i..=k {
            let result = if i == j {
                vec![(deg4[i].clone(), rat(1))]
            } else {
                Vec::new()
            };
            symmetric_entries(&mut products, &deg2[i], &deg2[j], result);
        }
    }
    for (i, x) in deg2.iter().enumerate() {
        for (j, square) in deg4.iter().enumerate() {
            let result = if i == j {
                vec![(top.clone(), cube(i))]
            } else {
                Vec::new()
            };
            products.push(entry(x, square, result.clone()));
            products.push(entry(square, x, result));
        }
    }
    build_sc_algebra(&ScPresentation {
        label: ModelSpec::Blowup(spec.clone()).to_string(),
        degree_bound: 6,
        basis: vec![
            vec!["1".into()],
            vec![],
            deg2,
            vec![],
            deg4,
            vec![],
            vec![top],
        ],
        unit: "1".into(),
        products,
        differential: Vec::new(),
    })
}

/// `(H*(M) (x) L(x), dx = ell b - sum a_i)` with `|x| = 1`, degree bound 7.
pub fn sasaki_circle_model(spec: &CircleBundleSpec) -> Result<Algebra> {
    if spec.ell == 0 {
        return Err(Error::InvalidModel("l must be positive".into()));
    }
    let base = cp3_blowup_algebra(&BlowupSpec {
        k: spec.k,
        relation_sign: spec.relation_sign,
    })?;
    let euler = base.parse_cochain(&spec.euler_expression())?;
    let ext = hirsch_extend(&HirschExtensionSpec {
        base,
        generator: GeneratorSpec::new("x", 1),
        euler_cocycle: euler,
    })?;
    Ok(ext.relabel(ModelSpec::SasakiCircle(spec.clone()).to_string()))
}

#[derive(Clone, Debug)]
pub struct PairingBlock {
    /// Pairs `H^degree` with `H^(n - degree)`.
    pub degree: usize,
    /// Rows index `H^degree`, columns index `H^(n - degree)`.
    pub matrix: Matrix,
    pub rank: usize,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug)]
pub struct PoincarePairing {
    pub formal_dim: usize,
    pub top_class: String,
    pub blocks: Vec<PairingBlock>,
}

impl PoincarePairing {
    pub fn nondegenerate(&self) -> bool {
        self.blocks.iter().all(|b| b.nondegenerate)
    }

    pub fn block(&self, degree: usize) -> Option<&PairingBlock> {
        self.blocks.iter().find(|b| b.degree == degree)
    }
}

/// Pairing matrices `H^j x H^(n-j) -> H^n = Q` for `j <= n/2`, against the
/// first basis class of `H^n`.
pub fn poincare_gram(algebra: &Algebra, formal_dim: usize) -> Result<PoincarePairing> {
    let betti = betti_vector(algebra, formal_dim)?;
    if betti[formal_dim] != 1 {
        return Err(Error::NoFundamentalClass {
            degree: formal_dim,
            betti: betti[formal_dim],
        });
    }
    let top = cohomology_basis(algebra, formal_dim)?.remove(0);
    let mut blocks = Vec::new();
    for j in 0..=formal_dim / 2 {
        let left = cohomology_basis(algebra, j)?;
        let right = cohomology_basis(algebra, formal_dim - j)?;
        let mut m = Matrix::zeros(left.len(), right.len());
        for (p, u) in left.iter().enumerate() {
            for (q, v) in right.iter().enumerate() {
                m[(p, q)] = cup(u, v)?.coords()[0].clone();
            }
        }
        let rank = m.rank();
        blocks.push(PairingBlock {
            degree: j,
            nondegenerate: m.rows() == m.cols() && rank == m.rows(),
            rank,
            matrix: m,
        });
    }
    Ok(PoincarePairing {
        formal_dim,
        top_class: top.representative().to_string(),
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    /// Columns are the new basis vectors.
    pub change_of_basis: Matrix,
    pub diagonal: Vec<Rational>,
}

impl Diagonalization {
    /// (positive, negative) diagonal entries.
    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diagonal.iter().filter(|d| d.is_positive()).count();
        (pos, self.diagonal.len() - pos)
    }
}

/// Congruence diagonalization `P^T G P = D` of a nondegenerate symmetric
/// form by symmetric elimination. When every remaining diagonal entry is
/// zero, a basis vector `u` is replaced by `u + v` with `g(u, v) != 0`.
pub fn diagonalize_pairing(g: &Matrix) -> Result<Diagonalization> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut p = Matrix::identity(n);

    // u_i <- u_i + c u_j, applied to the form and to P.
    let add = |a: &mut Matrix, p: &mut Matrix, i: usize, j: usize, c: &Rational| {
        for r in 0..n {
            let v = &a[(r, j)] * c;
            a[(r, i)] += v;
        }
        for r in 0..n {
            let v = &a[(j, r)] * c;
            a[(i, r)] += v;
        }
        for r in 0..n {
            let v = &p[(r, j)] * c;
            p[(r, i)] += v;
        }
    };
    let swap = |a: &mut Matrix, p: &mut Matrix, i: usize, j: usize| {
        for r in 0..n {
            let t = a[(r, i)].clone();
            a[(r, i)] = a[(r, j)].clone();
            a[(r, j)] = t;
        }
        for r in 0..n {
            let t = a[(i, r)].clone();
            a[(i, r)] = a[(j, r)].clone();
            a[(j, r)] = t;
            let t = p[(r, i)].clone();
            p[(r, i)] = p[(r, j)].clone();
            p[(r, j)] = t;
        }
    };

    for i in 0..n {
        if a[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) {
                add(&mut a, &mut p, i, j, &Rational::one());
            } else {
                return Err(Error::Degenerate);
            }
        }
        let pivot = a[(i, i)].clone();
        for j in i + 1..n {
            if a[(j, i)].is_zero() {
                continue;
            }
            let c = -(&a[(j, i)] / &pivot);
            add(&mut a, &mut p, j, i, &c);
        }
    }
    Ok(Diagonalization {
        change_of_basis: p,
        diagonal: (0..n).map(|i| a[(i, i)].clone()).collect(),
    })
}

/// Degree-5 cohomology of the circle model next to the kernel of
/// multiplication by the Euler class `H^4(M) -> H^6(M)`.
#[derive(Clone, Debug)]
pub struct CircleH5Report {
    pub dim_h5: usize,
    pub euler_kernel_dim: usize,
    /// Cohomology basis representatives in degree 5.
    pub computed_basis: Vec<String>,
    /// `(ell a_i^2 + b^2) x`, with whether each is closed.
    pub plus_family: Vec<(String, bool)>,
    /// `(ell a_i^2 - b^2) x`, with whether each is closed.
    pub minus_family: Vec<(String, bool)>,
}

impl CircleH5Report {
    pub fn sign_note(&self) -> String {
        let plus = self.plus_family.iter().all(|(_, c)| *c);
        let minus = self.minus_family.iter().all(|(_, c)| *c);
        match (plus, minus) {
            (true, _) => "the (l a_i^2 + b^2) x family is closed for this relation sign".into(),
            (false, true) => {
                "sign discrepancy: (l a_i^2 + b^2) x is not closed here; (l a_i^2 - b^2) x is"
                    .into()
            }
            (false, false) => "neither (l a_i^2 +- b^2) x family is closed".into(),
        }
    }
}

pub fn circle_h5_report(spec: &CircleBundleSpec) -> Result<CircleH5Report> {
    let model = sasaki_circle_model(spec)?;
    let h5 = cohomology_basis(&model, 5)?;

    let base = cp3_blowup_algebra(&BlowupSpec {
        k: spec.k,
        relation_sign: spec.relation_sign,
    })?;
    let euler = base.parse_cochain(&spec.euler_expression())?;
    let euler_class = class_of(&euler)?.ok_or(Error::NotClosed(2))?;
    let mult = right_multiplication_matrix(&euler_class, 4)?;
    let euler_kernel_dim = kernel_basis(&mult).dim();

    let family = |sign: &str| -> Result<Vec<(String, bool)>> {
        (1..=spec.k)
            .map(|i| {
                let src = format!("{}*a{i}^2*x {sign} b^2*x", spec.ell);
                let c = model.parse_cochain(&src)?;
                Ok((
                    format!("({} a{i}^2 {sign} b^2) x", spec.ell),
                    c.d()?.is_zero(),
                ))
            })
            .collect()
    };
    Ok(CircleH5Report {
        dim_h5: h5.len(),
        euler_kernel_dim,
        computed_basis: h5.iter().map(|c| c.representative().to_string()).collect(),
        plus_family: family("+")?,
        minus_family: family("-")?,
    })
}

/// Parses a comma-separated list of rationals such as `1,2,-3/4`.
pub fn parse_lambdas(src: &str) -> Result<Vec<Rational>> {
    src.split(',')
        .map(|s| {
            crate::linalg::parse_rational(s)
                .ok_or_else(|| Error::InvalidModel(format!("bad rational `{}`", s.trim())))
        })
        .collect()
}

/// Integer helper for building `ell` as a rational.
pub fn ell_rational(ell: u64) -> Rational {
    Rational::from_integer(BigInt::from(ell))
}
