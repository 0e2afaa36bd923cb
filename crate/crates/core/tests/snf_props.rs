mod common {
    pub mod minors;
}

use common::minors;
use modreg_core::snf::{cokernel_structure, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(-50i64..=50, r * c))
    })
}

fn permute(rows: usize, cols: usize, a: &[i64], rp: &[usize], cp: &[usize]) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len());
    for &r in rp {
        for &c in cp {
            out.push(a[r * cols + c]);
        }
    }
    debug_assert_eq!(out.len(), rows * cols);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn snf_is_a_unimodular_diagonalization((r, c, a) in matrix()) {
        let m = IntMatrix::from_i64(r, c, &a).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());

        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|d| !d.is_negative()));
        let nonzero: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
        prop_assert!(diag[..nonzero.len()].iter().all(|d| !d.is_zero()));
        prop_assert!(nonzero.windows(2).all(|w| (w[1] % w[0]).is_zero()));

        let expected: Vec<BigInt> = minors::invariant_factors(r, c, &a).into_iter().map(BigInt::from).collect();
        let got: Vec<BigInt> = nonzero.into_iter().cloned().collect();
        prop_assert_eq!(got, expected);

        if r == c {
            let prod: BigInt = diag.iter().product();
            prop_assert_eq!(m.determinant().unwrap().abs(), prod);
        }
    }

    #[test]
    fn cokernel_is_invariant_under_permutation(
        (r, c, a) in matrix(),
        rs in any::<prop::sample::Index>(),
        cs in any::<prop::sample::Index>(),
    ) {
        let mut rp: Vec<usize> = (0..r).collect();
        let mut cp: Vec<usize> = (0..c).collect();
        rp.rotate_left(rs.index(r));
        cp.reverse();
        cp.rotate_left(cs.index(c));
        let m = IntMatrix::from_i64(r, c, &a).unwrap();
        let p = IntMatrix::from_i64(r, c, &permute(r, c, &a, &rp, &cp)).unwrap();
        prop_assert_eq!(cokernel_structure(&m).unwrap(), cokernel_structure(&p).unwrap());
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_multiplication(
        (r, c, a) in matrix(),
        ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12),
    ) {
        let m = IntMatrix::from_i64(r, c, &a).unwrap();
        // Product of elementary matrices I + k E_ij, i != j.
        let mut u = IntMatrix::identity(r);
        for &(i, j, k) in &ops {
            let (i, j) = (i % r, j % r);
            if i == j {
                continue;
            }
            let mut e = vec![0i64; r * r];
            for d in 0..r {
                e[d * r + d] = 1;
            }
            e[i * r + j] = k;
            u = IntMatrix::from_i64(r, r, &e).unwrap().mul(&u).unwrap();
        }
        prop_assert!(u.determinant().unwrap().is_one());
        let um = u.mul(&m).unwrap();
        prop_assert_eq!(cokernel_structure(&m).unwrap(), cokernel_structure(&um).unwrap());
    }
}

#[test]
fn minors_oracle_examples() {
    assert_eq!(minors::invariant_factors(2, 2, &[2, 0, 0, 4]), vec![2, 4]);
    assert_eq!(minors::invariant_factors(2, 2, &[4, 0, 0, 6]), vec![2, 12]);
    assert_eq!(minors::invariant_factors(2, 3, &[0; 6]), Vec::<i128>::new());
}
