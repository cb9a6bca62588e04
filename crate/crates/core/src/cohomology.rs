//! Cocycles, coboundaries and cohomology classes.
//!
//! For each degree `k` the cocycles `Z` and coboundaries `B` are stored as
//! canonical subspaces. Cohomology representatives are the basis vectors of
//! `Z` sitting at the non-pivot columns of `B` written in `Z`-coordinates, so
//! the choice depends only on the basis order of the algebra. Results are
//! memoized per handle.

use std::sync::Arc;

use num::Zero;

use crate::algebra::{Algebra, Cochain};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, solve, zero_vec, Matrix, Rational, Subspace};

#[derive(Debug)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    /// Coboundaries written in cocycle coordinates, in RREF.
    boundary_in_cycles: Subspace,
    /// Cocycle-basis positions that carry the cohomology basis.
    free_positions: Vec<usize>,
}

impl DegreeCohomology {
    fn compute(algebra: &Algebra, k: usize) -> Result<DegreeCohomology> {
        let d_out = algebra.differential_matrix(k)?;
        let cocycles = kernel_basis(d_out);
        let coboundaries = if k == 0 {
            Subspace::zero(algebra.dim(0))
        } else {
            Subspace::row_space(&algebra.differential_matrix(k - 1)?.transpose())
        };
        let rows: Vec<Vec<Rational>> = coboundaries
            .vectors()
            .into_iter()
            .map(|b| cocycles.coordinates(&b).map(|c| c.expect("d^2 = 0")))
            .collect::<Result<_, _>>()?;
        let boundary_in_cycles = Subspace::from_vectors(cocycles.dim(), rows);
        let pivots = boundary_in_cycles.pivots();
        let free_positions = (0..cocycles.dim())
            .filter(|i| !pivots.contains(i))
            .collect();
        Ok(DegreeCohomology {
            degree: k,
            cocycles,
            coboundaries,
            boundary_in_cycles,
            free_positions,
        })
    }

    pub fn betti(&self) -> usize {
        self.free_positions.len()
    }

    /// Cocycle representatives of the cohomology basis.
    pub fn representatives(&self) -> Vec<Vec<Rational>> {
        let z = self.cocycles.basis();
        self.free_positions
            .iter()
            .map(|&i| z.row(i).to_vec())
            .collect()
    }

    /// Class coordinates of a vector, or `None` if it is not a cocycle.
    pub fn class_coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        let Some(mut c) = self.cocycles.coordinates(v)? else {
            return Ok(None);
        };
        let b = self.boundary_in_cycles.basis();
        for (row, &p) in self.boundary_in_cycles.pivots().iter().enumerate() {
            if c[p].is_zero() {
                continue;
            }
            let factor = c[p].clone();
            for (j, x) in b.row(row).iter().enumerate() {
                if !x.is_zero() {
                    c[j] -= &factor * x;
                }
            }
        }
        Ok(Some(
            self.free_positions.iter().map(|&i| c[i].clone()).collect(),
        ))
    }
}

pub(crate) fn degree_cohomology(algebra: &Algebra, k: usize) -> Result<Arc<DegreeCohomology>> {
    let top = algebra.top_analyzable_degree();
    if k > top {
        return Err(Error::CohomologyOutOfRange { degree: k, top });
    }
    let cell = &algebra.data().cohomology_cache[k];
    if let Some(h) = cell.get() {
        return Ok(h.clone());
    }
    let computed = Arc::new(DegreeCohomology::compute(algebra, k)?);
    Ok(cell.get_or_init(|| computed).clone())
}

/// A cohomology class with a distinguished cocycle representative.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    representative: Cochain,
    coords: Vec<Rational>,
}

impl PartialEq for CohomologyClass {
    /// Classes compare by coordinates, not by representative.
    fn eq(&self, other: &Self) -> bool {
        self.representative
            .algebra()
            .same_as(other.representative.algebra())
            && self.degree() == other.degree()
            && self.coords == other.coords
    }
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.representative.degree()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn representative(&self) -> &Cochain {
        &self.representative
    }

    pub fn algebra(&self) -> &Algebra {
        self.representative.algebra()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Sum of classes, represented by the sum of representatives.
    pub fn add(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        let representative = self.representative.add(&other.representative)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CohomologyClass {
            representative,
            coords,
        })
    }

    pub fn scale(&self, by: &Rational) -> CohomologyClass {
        CohomologyClass {
            representative: self.representative.scale(by),
            coords: self.coords.iter().map(|a| a * by).collect(),
        }
    }
}

pub fn cohomology_basis(algebra: &Algebra, k: usize) -> Result<Vec<CohomologyClass>> {
    let h = degree_cohomology(algebra, k)?;
    let n = h.betti();
    h.representatives()
        .into_iter()
        .enumerate()
        .map(|(i, rep)| {
            let mut coords = zero_vec(n);
            coords[i] = Rational::from_integer(1.into());
            Ok(CohomologyClass {
                representative: algebra.cochain(k, rep)?,
                coords,
            })
        })
        .collect()
}

/// Betti numbers `b_0..=b_up_to`.
pub fn betti_vector(algebra: &Algebra, up_to: usize) -> Result<Vec<usize>> {
    (0..=up_to)
        .map(|k| degree_cohomology(algebra, k).map(|h| h.betti()))
        .collect()
}

/// The class of `u`, or `None` if `u` is not closed.
pub fn class_of(u: &Cochain) -> Result<Option<CohomologyClass>> {
    let h = degree_cohomology(u.algebra(), u.degree())?;
    Ok(h.class_coordinates(u.coords())?
        .map(|coords| CohomologyClass {
            representative: u.clone(),
            coords,
        }))
}

/// The class with the given coordinates, represented by the matching
/// combination of basis representatives.
pub fn class_from_coords(
    algebra: &Algebra,
    k: usize,
    coords: Vec<Rational>,
) -> Result<CohomologyClass> {
    let h = degree_cohomology(algebra, k)?;
    if coords.len() != h.betti() {
        return Err(Error::CoordinateLength {
            degree: k,
            expected: h.betti(),
            found: coords.len(),
        });
    }
    let mut rep = zero_vec(algebra.dim(k));
    for (c, r) in coords.iter().zip(h.representatives()) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in rep.iter_mut().zip(r) {
            *x += c * y;
        }
    }
    Ok(CohomologyClass {
        representative: algebra.cochain(k, rep)?,
        coords,
    })
}

pub fn zero_class(algebra: &Algebra, k: usize) -> Result<CohomologyClass> {
    let n = degree_cohomology(algebra, k)?.betti();
    class_from_coords(algebra, k, zero_vec(n))
}

/// A cochain `w` with `dw = u` (free variables zeroed), or `None` if `u` is
/// closed but not exact.
pub fn find_primitive(u: &Cochain) -> Result<Option<Cochain>> {
    let alg = u.algebra();
    let k = u.degree();
    if !u.d()?.is_zero() {
        return Err(Error::NotClosed(k));
    }
    // nothing maps into degree 0
    if k == 0 {
        return Ok(None);
    }
    let d = alg.differential_matrix(k - 1)?;
    match solve(d, u.coords())? {
        Some(sol) => Ok(Some(alg.cochain(k - 1, sol.particular)?)),
        None => Ok(None),
    }
}

/// Cup product, represented by the product of representatives.
pub fn cup(a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
    if !a.algebra().same_as(b.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let product = a.representative.mul(&b.representative)?;
    class_of(&product)?.ok_or(Error::NotClosed(product.degree()))
}

/// Matrix of `H^j -> H^{j + |c|}`, `h -> h * c`, in cohomology coordinates
/// (one column per basis class of `H^j`).
pub fn right_multiplication_matrix(c: &CohomologyClass, j: usize) -> Result<Matrix> {
    let alg = c.algebra();
    let target = degree_cohomology(alg, j + c.degree())?.betti();
    let columns: Vec<Vec<Rational>> = cohomology_basis(alg, j)?
        .iter()
        .map(|h| cup(h, c).map(|p| p.coords))
        .collect::<Result<_>>()?;
    Ok(if columns.is_empty() {
        Matrix::zeros(target, 0)
    } else {
        Matrix::from_rows(target, columns).transpose()
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::algebra::{build_free_cdga, GeneratorSpec};
    use crate::expr::Expr;

    fn sphere() -> Algebra {
        let gens = vec![GeneratorSpec::new("a", 2), GeneratorSpec::new("x", 3)];
        let diffs = BTreeMap::from([("x".to_string(), Expr::parse("a^2").unwrap())]);
        build_free_cdga(&gens, &diffs, 8).unwrap()
    }

    #[test]
    fn sphere_cohomology() {
        let s = sphere();
        assert_eq!(betti_vector(&s, 7).unwrap(), vec![1, 0, 1, 0, 0, 0, 0, 0]);
        let h2 = cohomology_basis(&s, 2).unwrap();
        assert_eq!(h2.len(), 1);
        assert_eq!(h2[0].representative().to_string(), "a");
        assert!(cohomology_basis(&s, 4).unwrap().is_empty());
        assert!(matches!(
            betti_vector(&s, 8),
            Err(Error::CohomologyOutOfRange { degree: 8, top: 7 })
        ));
    }

    #[test]
    fn classes_and_primitives() {
        let s = sphere();
        let a2 = s.parse_cochain("a^2").unwrap();
        assert!(class_of(&a2).unwrap().unwrap().is_zero());
        assert_eq!(find_primitive(&a2).unwrap().unwrap().to_string(), "x");
        let x = s.parse_cochain("x").unwrap();
        assert!(class_of(&x).unwrap().is_none());
        assert!(matches!(find_primitive(&x), Err(Error::NotClosed(3))));
        let zero = s.zero_cochain(4).unwrap();
        assert!(find_primitive(&zero).unwrap().unwrap().is_zero());
        let a = s.parse_cochain("a").unwrap();
        assert_eq!(find_primitive(&a).unwrap(), None);
        assert_eq!(
            find_primitive(&s.parse_cochain("1").unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn unit_class_is_neutral() {
        let s = sphere();
        let one = class_of(&s.unit_cochain()).unwrap().unwrap();
        let a = class_of(&s.parse_cochain("a").unwrap()).unwrap().unwrap();
        assert_eq!(cup(&one, &a).unwrap(), a);
        assert!(cup(&a, &a).unwrap().is_zero());
    }
}
