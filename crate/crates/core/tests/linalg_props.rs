use masseylab::linalg::{kernel_basis, rat, rref, solve, Matrix, Rational, Subspace};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
            let rows = xs
                .chunks(c)
                .map(|row| row.iter().map(|&x| rat(x)).collect())
                .collect();
            Matrix::from_rows(c, rows)
        })
    })
}

fn vectors(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(
        prop::collection::vec((-2i64..=2).prop_map(rat), dim),
        0..=max,
    )
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in matrix(5, 6)) {
        let r = rref(&m);
        prop_assert_eq!(rref(&r), r.clone());
        prop_assert_eq!(r.rank(), m.rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix(5, 6)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.dim() + m.rank(), m.cols());
        for v in k.vectors() {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn solve_recovers_a_preimage(m in matrix(5, 5), x in prop::collection::vec(-4i64..=4, 5)) {
        let x: Vec<Rational> = x[..m.cols()].iter().map(|&v| rat(v)).collect();
        let b = m.mul_vec(&x);
        let sol = solve(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&sol.particular), b);
        prop_assert_eq!(sol.homogeneous.dim(), m.cols() - m.rank());
    }

    #[test]
    fn membership_matches_rank(vs in vectors(4, 4), v in prop::collection::vec((-2i64..=2).prop_map(rat), 4)) {
        let s = Subspace::from_vectors(4, vs.clone());
        let mut stacked = vs.clone();
        stacked.push(v.clone());
        let grows = Matrix::from_rows(4, stacked).rank() > s.dim();
        prop_assert_eq!(s.member(&v).unwrap(), !grows);
    }

    #[test]
    fn sum_and_intersection_dimensions(a in vectors(4, 3), b in vectors(4, 3)) {
        let (u, v) = (Subspace::from_vectors(4, a.clone()), Subspace::from_vectors(4, b.clone()));
        let sum = u.sum(&v).unwrap();
        let meet = u.intersection(&v).unwrap();
        let all: Vec<_> = a.into_iter().chain(b).collect();
        let stacked_rank = if all.is_empty() { 0 } else { Matrix::from_rows(4, all).rank() };
        prop_assert_eq!(sum.dim(), stacked_rank);
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + v.dim());
        for w in meet.vectors() {
            prop_assert!(u.member(&w).unwrap() && v.member(&w).unwrap());
        }
    }
}

/// Rank as the size of the largest nonzero minor, in integer arithmetic.
fn rank_by_minors(rows: &[[i64; 3]]) -> usize {
    fn det(m: &[[i64; 3]], r: &[usize], c: &[usize]) -> i64 {
        match r.len() {
            1 => m[r[0]][c[0]],
            2 => m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]],
            _ => (0..3)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let rest: Vec<usize> = c.iter().copied().filter(|&x| x != c[j]).collect();
                    sign * m[r[0]][c[j]] * det(m, &r[1..], &rest)
                })
                .sum(),
        }
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0..1usize << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }
    (1..=rows.len().min(3))
        .rev()
        .find(|&k| {
            subsets(rows.len(), k)
                .iter()
                .any(|r| subsets(3, k).iter().any(|c| det(rows, r, c) != 0))
        })
        .unwrap_or(0)
}

#[test]
fn sum_dimension_brute_force_over_small_grid() {
    let grid: Vec<[i64; 3]> = (0..27)
        .map(|n| [n % 3 - 1, (n / 3) % 3 - 1, n / 9 - 1])
        .collect();
    let q = |v: &[i64; 3]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
    for a in &grid {
        for b in grid.iter().step_by(2) {
            for c in grid.iter().step_by(3) {
                let u = Subspace::from_vectors(3, vec![q(a)]);
                let v = Subspace::from_vectors(3, vec![q(b), q(c)]);
                assert_eq!(u.sum(&v).unwrap().dim(), rank_by_minors(&[*a, *b, *c]));
                assert_eq!(v.dim(), rank_by_minors(&[*b, *c]));
            }
        }
    }
}
