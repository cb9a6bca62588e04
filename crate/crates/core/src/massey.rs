//! Triple Massey products with indeterminacy, and exhaustive scans.
//!
//! For classes `[a1], [a2], [a3]` of degrees `p1, p2, p3` with
//! `a1 a2 = dx` and `a2 a3 = dy`, the product is the class of
//! `a1 y + (-1)^(p1+1) x a3` modulo `[a1] H^(p2+p3-1) + [a3] H^(p1+p2-1)`.
//! The quotient is never formed; triviality is membership of the
//! representative in the indeterminacy subspace.

use std::fmt;

use num::One;
use rayon::prelude::*;

use crate::algebra::{Algebra, Cochain};
use crate::cohomology::{
    class_of, cohomology_basis, cup, degree_cohomology, find_primitive, CohomologyClass,
};
use crate::error::{Error, Result};
use crate::linalg::{Rational, Subspace};

#[derive(Clone, Debug)]
pub struct DefinedMassey {
    pub representative: CohomologyClass,
    /// Indeterminacy in cohomology coordinates of degree `p1 + p2 + p3 - 1`.
    pub indeterminacy: Subspace,
    pub trivial: bool,
    /// Primitive with `dx = a1 a2`.
    pub x: Cochain,
    /// Primitive with `dy = a2 a3`.
    pub y: Cochain,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum MasseyStatus {
    Defined(DefinedMassey),
    Undefined {
        left_product_nonzero: bool,
        right_product_nonzero: bool,
    },
}

#[derive(Clone, Debug)]
pub struct MasseyResult {
    pub degrees: [usize; 3],
    pub status: MasseyStatus,
}

impl MasseyResult {
    pub fn defined(&self) -> Option<&DefinedMassey> {
        match &self.status {
            MasseyStatus::Defined(d) => Some(d),
            MasseyStatus::Undefined { .. } => None,
        }
    }

    pub fn is_nontrivial(&self) -> bool {
        self.defined().is_some_and(|d| !d.trivial)
    }

    pub fn is_trivial(&self) -> bool {
        self.defined().is_some_and(|d| d.trivial)
    }
}

fn check_triple(classes: [&CohomologyClass; 3]) -> Result<(Algebra, [usize; 3])> {
    let alg = classes[0].algebra().clone();
    if classes.iter().any(|c| !c.algebra().same_as(&alg)) {
        return Err(Error::AlgebraMismatch);
    }
    let degrees = classes.map(CohomologyClass::degree);
    if degrees.contains(&0) {
        return Err(Error::ZeroDegreeClass);
    }
    let total = degrees.iter().sum::<usize>() - 1;
    let top = alg.top_analyzable_degree();
    if total > top {
        return Err(Error::CohomologyOutOfRange { degree: total, top });
    }
    Ok((alg, degrees))
}

/// `<c1, c2, c3>` with primitives solved at cochain level.
pub fn massey_triple(
    c1: &CohomologyClass,
    c2: &CohomologyClass,
    c3: &CohomologyClass,
) -> Result<MasseyResult> {
    let (_, degrees) = check_triple([c1, c2, c3])?;
    let left = cup(c1, c2)?;
    let right = cup(c2, c3)?;
    if !left.is_zero() || !right.is_zero() {
        return Ok(MasseyResult {
            degrees,
            status: MasseyStatus::Undefined {
                left_product_nonzero: !left.is_zero(),
                right_product_nonzero: !right.is_zero(),
            },
        });
    }
    let x = find_primitive(left.representative())?.expect("zero class is exact");
    let y = find_primitive(right.representative())?.expect("zero class is exact");
    massey_with_primitives(c1, c2, c3, &x, &y)
}

/// `<c1, c2, c3>` evaluated with caller-supplied primitives.
pub fn massey_with_primitives(
    c1: &CohomologyClass,
    c2: &CohomologyClass,
    c3: &CohomologyClass,
    x: &Cochain,
    y: &Cochain,
) -> Result<MasseyResult> {
    let (alg, degrees) = check_triple([c1, c2, c3])?;
    let [p1, p2, p3] = degrees;
    let (a1, a2, a3) = (
        c1.representative(),
        c2.representative(),
        c3.representative(),
    );
    let a12 = a1.mul(a2)?;
    let a23 = a2.mul(a3)?;
    if x.degree() != p1 + p2 - 1 || x.d()? != a12 {
        return Err(Error::BadPrimitive(p1 + p2));
    }
    if y.degree() != p2 + p3 - 1 || y.d()? != a23 {
        return Err(Error::BadPrimitive(p2 + p3));
    }

    let sign = if (p1 + 1) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let value = a1.mul(y)?.add(&x.mul(a3)?.scale(&sign))?;
    let representative = class_of(&value)?.ok_or(Error::NotClosed(value.degree()))?;
    let indeterminacy = indeterminacy(c1, c3, degrees)?;
    debug_assert!(alg.same_as(representative.algebra()));
    let trivial = indeterminacy.member(representative.coords())?;
    Ok(MasseyResult {
        degrees,
        status: MasseyStatus::Defined(DefinedMassey {
            representative,
            indeterminacy,
            trivial,
            x: x.clone(),
            y: y.clone(),
        }),
    })
}

/// `[a1] H^(p2+p3-1) + [a3] H^(p1+p2-1)` in coordinates of
/// `H^(p1+p2+p3-1)`.
pub fn indeterminacy(
    c1: &CohomologyClass,
    c3: &CohomologyClass,
    degrees: [usize; 3],
) -> Result<Subspace> {
    let [p1, p2, p3] = degrees;
    let alg = c1.algebra();
    let total = p1 + p2 + p3 - 1;
    let ambient = degree_cohomology(alg, total)?.betti();
    let mut vectors = Vec::new();
    for h in cohomology_basis(alg, p2 + p3 - 1)? {
        vectors.push(cup(c1, &h)?.coords().to_vec());
    }
    for h in cohomology_basis(alg, p1 + p2 - 1)? {
        vectors.push(cup(&h, c3)?.coords().to_vec());
    }
    Ok(Subspace::from_vectors(ambient, vectors))
}

/// A class entering a scan: one basis class, or the sum of several.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassRef {
    pub degree: usize,
    /// Indices into the cohomology basis of `degree`, summed.
    pub members: Vec<usize>,
}

impl ClassRef {
    pub fn basis(degree: usize, index: usize) -> Self {
        ClassRef {
            degree,
            members: vec![index],
        }
    }

    fn resolve(&self, basis: &[CohomologyClass]) -> Result<CohomologyClass> {
        let mut class = basis[self.members[0]].clone();
        for &m in &self.members[1..] {
            class = class.add(&basis[m])?;
        }
        Ok(class)
    }
}

#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub classes: [ClassRef; 3],
    /// Representatives of the three classes, for reporting.
    pub labels: [String; 3],
    pub result: MasseyResult,
}

impl ScanEntry {
    pub fn triple_label(&self) -> String {
        format!(
            "<{}, {}, {}>",
            self.labels[0], self.labels[1], self.labels[2]
        )
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub algebra: String,
    pub top_degree: usize,
    pub entries: Vec<ScanEntry>,
    pub defined: usize,
    pub trivial: usize,
    pub nontrivial: usize,
    pub undefined: usize,
}

impl ScanReport {
    pub fn first_nontrivial(&self) -> Option<&ScanEntry> {
        self.entries.iter().find(|e| e.result.is_nontrivial())
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} triples: {} defined ({} trivial, {} nontrivial), {} undefined",
            self.entries.len(),
            self.defined,
            self.trivial,
            self.nontrivial,
            self.undefined
        )
    }
}

/// Degree triples `(p1, p2, p3)` with every `pi >= 1`, a nonzero Betti number
/// in each slot, and `p1 + p2 + p3 - 1 <= top_degree`, in lexicographic order.
fn degree_triples(betti: &[usize], top_degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    let positive: Vec<usize> = (1..betti.len()).filter(|&p| betti[p] > 0).collect();
    for &p1 in &positive {
        for &p2 in &positive {
            for &p3 in &positive {
                if p1 + p2 + p3 - 1 <= top_degree {
                    out.push([p1, p2, p3]);
                }
            }
        }
    }
    out
}

/// Number of ordered triples of basis classes a full scan examines.
pub fn admissible_triple_count(betti: &[usize], top_degree: usize) -> usize {
    degree_triples(betti, top_degree)
        .iter()
        .map(|t| t.iter().map(|&p| betti[p]).product::<usize>())
        .sum()
}

/// All ordered triples of cohomology basis classes with
/// `p1 + p2 + p3 - 1 <= top_degree`, sorted by degree triple then index triple.
pub fn massey_scan(algebra: &Algebra, top_degree: usize) -> Result<ScanReport> {
    massey_scan_with_threads(algebra, top_degree, 1)
}

pub fn massey_scan_with_threads(
    algebra: &Algebra,
    top_degree: usize,
    threads: usize,
) -> Result<ScanReport> {
    let family = |k: usize, n: usize| (0..n).map(|i| ClassRef::basis(k, i)).collect();
    scan_families(algebra, top_degree, threads, family)
}

/// Like [`massey_scan`], but each degree's family also contains every sum
/// `c_i + c_j` (`i < j`) of two basis classes.
pub fn massey_pair_sum_scan(
    algebra: &Algebra,
    top_degree: usize,
    threads: usize,
) -> Result<ScanReport> {
    let family = |k: usize, n: usize| {
        let mut out: Vec<ClassRef> = (0..n).map(|i| ClassRef::basis(k, i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                out.push(ClassRef {
                    degree: k,
                    members: vec![i, j],
                });
            }
        }
        out
    };
    scan_families(algebra, top_degree, threads, family)
}

fn scan_families(
    algebra: &Algebra,
    top_degree: usize,
    threads: usize,
    family: impl Fn(usize, usize) -> Vec<ClassRef>,
) -> Result<ScanReport> {
    let top = algebra.top_analyzable_degree();
    if top_degree > top {
        return Err(Error::CohomologyOutOfRange {
            degree: top_degree,
            top,
        });
    }
    let bases: Vec<Vec<CohomologyClass>> = (0..=top_degree)
        .map(|k| cohomology_basis(algebra, k))
        .collect::<Result<_>>()?;
    let betti: Vec<usize> = bases.iter().map(Vec::len).collect();
    let families: Vec<Vec<ClassRef>> = betti
        .iter()
        .enumerate()
        .map(|(k, &n)| family(k, n))
        .collect();

    let mut jobs = Vec::new();
    for [p1, p2, p3] in degree_triples(&betti, top_degree) {
        for a in &families[p1] {
            for b in &families[p2] {
                for c in &families[p3] {
                    jobs.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }

    let run = |refs: &[ClassRef; 3]| -> Result<ScanEntry> {
        let classes: Vec<CohomologyClass> = refs
            .iter()
            .map(|r| r.resolve(&bases[r.degree]))
            .collect::<Result<_>>()?;
        let result = massey_triple(&classes[0], &classes[1], &classes[2])?;
        let labels = [0, 1, 2].map(|i| classes[i].representative().to_string());
        Ok(ScanEntry {
            classes: refs.clone(),
            labels,
            result,
        })
    };
    let entries: Vec<ScanEntry> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| jobs.par_iter().map(run).collect::<Result<_>>())?
    } else {
        jobs.iter().map(run).collect::<Result<_>>()?
    };

    let defined = entries
        .iter()
        .filter(|e| e.result.defined().is_some())
        .count();
    let trivial = entries.iter().filter(|e| e.result.is_trivial()).count();
    Ok(ScanReport {
        algebra: algebra.label().to_string(),
        top_degree,
        defined,
        trivial,
        nontrivial: defined - trivial,
        undefined: entries.len() - defined,
        entries,
    })
}
