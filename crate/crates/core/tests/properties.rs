//! Randomized invariants of the basis generators, the sketch and the file
//! formats.

mod common;

use proptest::prelude::*;
use symrom::bounds::{optimal_tail, projection_error, SnapshotSvd};
use symrom::cli::io::{fmt_f64, read_csv, read_matrix, write_csv, write_matrix, Meta};
use symrom::numerics::{c64, frobenius, CMat, RMat};
use symrom::sketching::{SketchConfig, SrftSketch};
use symrom::symplectic::{check_structure, csvd, rcsvd, rcsvd_real, PoissonOperator};
use symrom::Error;

use common::{gaussian_snapshots, rel_diff};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

/// `(N, n_s, k, p)` with `2k <= 2N` and `k + p <= min(N, n_s)`.
fn dims() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (4usize..16, 4usize..20).prop_flat_map(|(n, n_s)| {
        let cap = n.min(n_s);
        (Just(n), Just(n_s), 1..=cap / 2).prop_flat_map(move |(n, n_s, k)| (Just(n), Just(n_s), Just(k), 0..=cap - k))
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn every_generator_returns_an_ortho_symplectic_basis(
        (n, n_s, k, p) in dims(),
        q in 0usize..3,
        seed in any::<u64>(),
    ) {
        let xs = gaussian_snapshots(2 * n, n_s, seed);
        let cfg = SketchConfig::new(k, p, q, seed);
        let tol = 1e-10 * ((2 * k) as f64).sqrt();
        for basis in [csvd(&xs, k), rcsvd(&xs, &cfg), rcsvd_real(&xs, &cfg)] {
            match basis {
                Ok(b) => {
                    prop_assert_eq!(b.k(), k);
                    let r = check_structure(&b, tol);
                    prop_assert!(r.pass, "defects {:?}", r);
                }
                // Gaussian snapshots have full rank; a gap error is the only
                // legitimate refusal of the real route.
                Err(Error::Gap { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }

    #[test]
    fn symplectic_inverse_is_a_left_inverse(n in 3usize..12, seed in any::<u64>()) {
        let xs = gaussian_snapshots(2 * n, n + 3, seed);
        let b = csvd(&xs, n / 2 + 1).unwrap();
        let mut prod = b.symplectic_inverse() * b.assemble();
        for i in 0..prod.nrows() {
            prod[(i, i)] -= 1.0;
        }
        prop_assert!(frobenius(prod.as_ref()) < 1e-12);
    }

    #[test]
    fn no_basis_beats_the_optimal_tail((n, n_s, k, p) in dims(), seed in any::<u64>()) {
        let xs = gaussian_snapshots(2 * n, n_s, seed);
        let svd = SnapshotSvd::compute(&xs).unwrap();
        let tail = optimal_tail(svd.spectrum(), k).unwrap();
        let opt = projection_error(&xs, &csvd(&xs, k).unwrap()).unwrap().frob;
        prop_assert!(rel_diff(opt, tail) < 1e-8, "csvd {opt} vs tail {tail}");
        let rand = projection_error(&xs, &rcsvd(&xs, &SketchConfig::new(k, p, 0, seed)).unwrap()).unwrap().frob;
        prop_assert!(rand >= tail * (1.0 - 1e-10));
    }

    #[test]
    fn srft_columns_have_the_expected_gram(n in 1usize..64, frac in 0.0f64..1.0, seed in any::<u64>()) {
        let l = 1 + ((n - 1) as f64 * frac) as usize;
        let s = SrftSketch::new(n, l, seed).unwrap();
        let dense = s.to_dense();
        let mut gram: CMat = dense.adjoint() * &dense;
        let scale = n as f64 / l as f64;
        for i in 0..l {
            gram[(i, i)] -= c64::new(scale, 0.0);
        }
        prop_assert!(frobenius(gram.as_ref()) < 1e-11 * scale * l as f64);
        // applying the fast transform agrees with the dense product
        let a = CMat::from_fn(3, n, |i, j| c64::new((i * n + j) as f64, (j as f64).sin()));
        let fast = s.apply(a.as_ref()).unwrap();
        let slow = &a * &dense;
        let diff = frobenius((&fast - &slow).as_ref());
        prop_assert!(diff <= 1e-12 * frobenius(slow.as_ref()).max(1.0));
    }

    #[test]
    fn poisson_matrix_is_orthogonal_and_squares_to_minus_identity(n in 1usize..20) {
        let j = PoissonOperator::new(n).to_dense();
        let mut jtj = j.transpose() * &j;
        let mut jj = &j * &j;
        for i in 0..2 * n {
            jtj[(i, i)] -= 1.0;
            jj[(i, i)] += 1.0;
        }
        prop_assert_eq!(frobenius(jtj.as_ref()), 0.0);
        prop_assert_eq!(frobenius(jj.as_ref()), 0.0);
    }

    #[test]
    fn matrix_files_round_trip_bit_for_bit(
        rows in 0usize..9,
        cols in 0usize..9,
        values in prop::collection::vec(any::<f64>(), 81),
    ) {
        let m = RMat::from_fn(rows, cols, |i, j| values[i * 9 + j]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.symp");
        write_matrix(&path, m.as_ref()).unwrap();
        let back = read_matrix(&path).unwrap();
        prop_assert_eq!((back.nrows(), back.ncols()), (rows, cols));
        for i in 0..rows {
            for j in 0..cols {
                prop_assert_eq!(back[(i, j)].to_bits(), m[(i, j)].to_bits());
            }
        }
        // dropping the last byte must be detected
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 1]).unwrap();
        prop_assert!(matches!(read_matrix(&path), Err(Error::Format(_))));
    }

    #[test]
    fn csv_numbers_round_trip_exactly(values in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..12)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows: Vec<Vec<String>> = values.iter().enumerate().map(|(i, v)| vec![i.to_string(), fmt_f64(*v)]).collect();
        write_csv(&path, &["i", "value"], &rows).unwrap();
        let (header, back) = read_csv(&path).unwrap();
        prop_assert_eq!(header, vec!["i".to_string(), "value".to_string()]);
        for (row, v) in back.iter().zip(&values) {
            prop_assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn metadata_round_trips(entries in prop::collection::btree_map("[a-z_]{1,10}", "[ -~&&[^=\n]]{0,20}", 0..8)) {
        let mut m = Meta::new();
        for (k, v) in &entries {
            m.set(k, v.trim());
        }
        let back = Meta::parse(&m.render()).unwrap();
        prop_assert_eq!(back, m);
    }
}
