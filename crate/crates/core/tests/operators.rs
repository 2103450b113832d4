//! Structural checks on truncated operators.

use ciflab_core::orlicz::TorusFunction;
use ciflab_core::seq::weak_quasinorm;
use ciflab_core::torusop::{
    build_asymmetric, build_commutator, build_multiplication, build_symmetric, BuildOptions, LatticeBasis, Matrix,
    OperatorKind, TruncatedOperator,
};
use ciflab_core::Exec;
use faer::Mat;

fn real(m: &Matrix) -> &Mat<f64> {
    match m {
        Matrix::Real(x) => x,
        Matrix::Complex(_) => panic!("expected real storage"),
    }
}

/// `P·M_f W²·P = W^{−1}·(P·W M_f W·P)·W` because `P` commutes with `W`, so the
/// two truncations share eigenvalues exactly.
#[test]
fn asymmetric_is_similar_to_symmetric() {
    let f = TorusFunction::shifted_cosine(1, 2.0).unwrap();
    let basis = LatticeBasis::new(1, 64.0).unwrap();
    let sym = build_symmetric(&f, &basis).unwrap();
    let asym = build_asymmetric(&f, &basis).unwrap();
    let mut want = sym.eig_hermitian(Exec::best()).unwrap();
    want.sort_by(f64::total_cmp);
    let mut got: Vec<f64> = real(asym.matrix())
        .eigenvalues()
        .unwrap()
        .iter()
        .map(|z| {
            assert!(z.im.abs() < 1e-10, "{z}");
            z.re
        })
        .collect();
    got.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() < 1e-10 * want.last().unwrap(), "{a} {b}");
    }
}

/// Singular values differ from eigenvalues only through the non-normality
/// of `M_f W²`, which is small for slowly varying `f`.
#[test]
fn asymmetric_top_singular_values_track_symmetric() {
    let f = TorusFunction::shifted_cosine(1, 2.0).unwrap();
    let big = LatticeBasis::new(1, 65.0).unwrap();
    let basis = LatticeBasis::new(1, 64.0).unwrap();
    let s_sym = build_symmetric(&f, &basis).unwrap().singvals(Exec::best()).unwrap();
    let s_asym = build_asymmetric(&f, &big).unwrap().singvals(Exec::best()).unwrap();
    let quarter = basis.len() / 4;
    for k in 0..quarter {
        let (a, b) = (s_asym.values()[k], s_sym.values()[k]);
        assert!((a - b).abs() <= 0.02 * b, "k = {k}: {a} {b}");
    }
}

#[test]
fn symmetric_is_hermitian_for_real_functions() {
    for f in [
        TorusFunction::cosine(2).unwrap(),
        TorusFunction::box_indicator(vec![-1.0, 0.0], vec![0.5, 2.0]).unwrap(),
        TorusFunction::radial_logspike(2, 1.0, 1e3).unwrap(),
    ] {
        let op = build_symmetric(&f, &LatticeBasis::new(2, 6.0).unwrap()).unwrap();
        let (defect, scale) = op.matrix().hermitian_defect(false);
        assert!(defect <= 1e-10 * scale, "{}: {defect} vs {scale}", f.label());
    }
}

#[test]
fn plane_wave_multiplication_is_a_shift() {
    let basis = LatticeBasis::new(1, 10.0).unwrap();
    let op = build_multiplication(&TorusFunction::plane_wave(vec![3]).unwrap(), &basis).unwrap();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let want = if basis.point(i)[0] - basis.point(j)[0] == 3 {
                1.0
            } else {
                0.0
            };
            let z = op.matrix().get(i, j);
            assert!((z.re - want).abs() < 1e-14 && z.im.abs() < 1e-14, "({i}, {j}) = {z}");
        }
    }
}

#[test]
fn commutator_singular_values_decay() {
    let f = TorusFunction::cosine(1).unwrap();
    let basis = LatticeBasis::new(1, 512.0).unwrap();
    let mu = build_commutator(&f, &basis).unwrap().singvals(Exec::best()).unwrap();
    let at = |n: usize| (n as f64).sqrt() * mu.values()[n];
    assert!(at(64) >= 1.5 * at(256), "{} {}", at(64), at(256));
    assert!(weak_quasinorm(&mu, 2.0).unwrap().is_finite());
}

#[test]
fn strategies_build_identical_matrices() {
    let f = TorusFunction::box_indicator(vec![-1.0], vec![2.0]).unwrap();
    let basis = LatticeBasis::new(1, 40.0).unwrap();
    let build = |exec| {
        let opts = BuildOptions {
            exec,
            ..BuildOptions::default()
        };
        TruncatedOperator::build(OperatorKind::HalfWeighted, &f, &basis, &opts).unwrap()
    };
    let (a, b) = (build(Exec::Sequential), build(Exec::Parallel));
    assert_eq!(a.matrix(), b.matrix());
    assert_eq!(
        a.singvals(Exec::Sequential).unwrap(),
        b.singvals(Exec::Sequential).unwrap()
    );
}
