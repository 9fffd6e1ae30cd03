use ias_core::builders::{build_graph, build_linear_shape};
use ias_core::domain::DomainBox;
use ias_core::eds::{eds_check, ASquareClass, EdsClass};
use ias_core::immersion::{
    blaschke_metric, christoffels, compute_a, dual_connection_identity, is_ias, metric_unchecked,
    monge_ampere_check, nabla_hat_a, ImmersionChart, Provenance,
};
use ias_core::linalg::int;
use ias_core::parse::parse_qpoly;
use ias_core::{Matrix, QPoly, Rational, ScalarField};

fn q(text: &str) -> QPoly {
    parse_qpoly(text, "x", 4).unwrap()
}

fn printed_a() -> Matrix<Rational> {
    Matrix::from_i64_rows(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, -1, -1]])
}

fn samples(seed: u64) -> Vec<Vec<Rational>> {
    DomainBox::cube(4, int(1)).random_points(5, seed)
}

#[test]
fn linear_shape_reproduces_printed_matrix() {
    let chart = build_linear_shape(&printed_a(), DomainBox::cube(4, int(1))).unwrap();
    // f comes out with the opposite sign of the printed quadratic
    assert_eq!(chart.f_poly().unwrap(), -&q("x1 x3 + x2 x4 + x2 x3"));
    for r in samples(1) {
        assert_eq!(compute_a::<Rational>(&chart, &r).unwrap(), printed_a());
        let con = christoffels::<Rational>(&chart, &r).unwrap();
        assert!(con.gamma.is_zero() && con.gamma_bar.is_zero());
        assert!(nabla_hat_a::<Rational>(&chart, &r).unwrap().is_zero());
    }
    let c = is_ias(&chart, &samples(2)).unwrap();
    assert!(c.constant);
    assert_eq!(c.c_exact, Some(int(1)));
    let v = eds_check::<Rational>(&chart, &samples(3)).unwrap();
    assert_eq!(v.classification, EdsClass::Other);
    assert_eq!(v.a_square_class, ASquareClass::Neither);
    assert!(v.omega_residual == 0.0 && v.omega1_residual > 0.0 && v.omega2_residual > 0.0);
    assert!(v.lemma_equivalences_hold);
}

#[test]
fn printed_quadratic_gives_negated_matrix() {
    let chart = build_graph(&q("x1 x3 + x2 x4 + x2 x3"), DomainBox::cube(4, int(1))).unwrap();
    let minus = printed_a().scale(&int(-1));
    for r in samples(4) {
        assert_eq!(compute_a::<Rational>(&chart, &r).unwrap(), minus);
    }
    let v = eds_check::<Rational>(&chart, &samples(5)).unwrap();
    assert_eq!(v.classification, EdsClass::Other);
}

/// The printed shape matrix of the `x1 x3 + x2 x4 + h(x2, x3)` family.
fn printed_example3_a(h: &QPoly, r: &[Rational]) -> Matrix<Rational> {
    let d = |i: usize, j: usize| h.partial(i).partial(j).eval(r);
    let (h22, h23, h33) = (d(1, 1), d(1, 2), d(2, 2));
    let (z, one) = (int(0), int(1));
    Matrix::from_rows(vec![
        vec![-one.clone(), -h23.clone(), -h33, z.clone()],
        vec![z.clone(), -one.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), one.clone(), z.clone()],
        vec![z.clone(), h22, h23, one],
    ])
}

#[test]
fn example3_family() {
    for (h, cubic) in [
        ("x2^3 + x2 x3^2", true),
        ("x2^2 x3^2 - 2 x3^3", true),
        ("3 x2^2 - x2 x3 + 1/2 x3^2", false),
    ] {
        let h = q(h);
        let f = &q("x1 x3 + x2 x4") + &h;
        let ma = monge_ampere_check(&ScalarField::from(f.clone()), 2, &samples(6)).unwrap();
        assert!(ma.constant && ma.agree);
        assert_eq!(ma.c_exact, Some(int(1)));
        let chart = build_graph(&f, DomainBox::cube(4, int(1))).unwrap();
        assert_eq!(is_ias(&chart, &samples(7)).unwrap().c_exact, Some(int(1)));
        let mut nonzero = false;
        for r in samples(8) {
            assert_eq!(compute_a::<Rational>(&chart, &r).unwrap(), printed_example3_a(&h, &r));
            nonzero |= !nabla_hat_a::<Rational>(&chart, &r).unwrap().is_zero();
        }
        assert_eq!(nonzero, cubic);
        let v = eds_check::<Rational>(&chart, &samples(9)).unwrap();
        assert_eq!(v.classification, EdsClass::Other);
    }
}

#[test]
fn dual_connection_residual_survives_corruption() {
    let f = q("x1 x3 + x2 x4 + x2^3 + x2 x3^2");
    let good = build_graph(&f, DomainBox::cube(4, int(1))).unwrap();
    let mut y = good.y_polys().unwrap();
    y[0] = &y[0] + &q("x2^2");
    let bad = ImmersionChart::from_polys(2, good.x_polys().unwrap(), y, f, good.domain.clone(), Provenance::Direct)
        .unwrap();
    let mut asymmetric = false;
    for r in samples(10) {
        assert!(dual_connection_identity::<Rational>(&good, &r).unwrap().is_zero());
        assert!(dual_connection_identity::<Rational>(&bad, &r).unwrap().is_zero());
        asymmetric |= !metric_unchecked::<Rational>(&bad, &r).unwrap().is_symmetric();
    }
    assert!(asymmetric);
    assert!(blaschke_metric::<Rational>(&bad, &samples(10)[0]).is_err());
}
