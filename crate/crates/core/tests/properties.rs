use proptest::prelude::*;

use statcalc_core::derivative::{derivative_at, graphic_mean, DerivativeOptions};
use statcalc_core::expr::{BinOp, Func, NamedConst};
use statcalc_core::mean_integral::{function_mean, integral};
use statcalc_core::tabular::{self, TabularFunction};
use statcalc_core::{
    antiderivative_grid, builtin_da_table, ftc_evaluate, parse, Expr, FunctionHandle, Interval,
    SamplePlan, Sampling, SHIPPED_SEEDS,
};

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..1e6).prop_map(Expr::Const),
        Just(Expr::Var),
        Just(Expr::Named(NamedConst::Pi)),
        Just(Expr::Named(NamedConst::E)),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, e)| Expr::call(f, e)),
        ]
    })
}

fn handle(text: &str) -> FunctionHandle {
    FunctionHandle::parse(text).unwrap()
}

proptest! {
    #[test]
    fn printed_form_reparses_identically(tree in arb_expr()) {
        let printed = tree.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &tree);
        prop_assert_eq!(parse(&reparsed.to_string()).unwrap(), reparsed);
    }

    #[test]
    fn evaluation_is_pure(tree in arb_expr(), x in -10.0f64..10.0) {
        let first = tree.evaluate(x);
        let second = tree.evaluate(x);
        match (first, second) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "evaluation changed outcome"),
        }
    }

    #[test]
    fn integral_is_linear_under_a_fixed_plan(
        alpha in -5.0f64..5.0,
        beta in -5.0f64..5.0,
        n in 1usize..2000,
        seed in any::<u64>(),
        random in any::<bool>(),
    ) {
        let iv = Interval::new(-1.0, 2.0).unwrap();
        let sampling = if random { Sampling::Random { n, seed } } else { Sampling::Uniform { n } };
        let plan = SamplePlan::new(iv, sampling).unwrap();
        let fx = "exp(x)";
        let gx = "x^2 - 3*sin(x)";
        let combined = handle(&format!("({alpha})*({fx}) + ({beta})*({gx})"));
        let lhs = integral(&combined, &plan).unwrap().value;
        let rhs = alpha * integral(&handle(fx), &plan).unwrap().value
            + beta * integral(&handle(gx), &plan).unwrap().value;
        let scale = alpha.abs() * integral(&handle("abs(exp(x))"), &plan).unwrap().value
            + beta.abs() * integral(&handle("abs(x^2 - 3*sin(x))"), &plan).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn constants_are_exact_under_any_plan(
        c in -1e6f64..1e6,
        n in 1usize..500,
        seed in any::<u64>(),
        random in any::<bool>(),
    ) {
        let iv = Interval::new(0.0, 7.0).unwrap();
        let sampling = if random { Sampling::Random { n, seed } } else { Sampling::Uniform { n } };
        let plan = SamplePlan::new(iv, sampling).unwrap();
        let m = function_mean(&FunctionHandle::Expr(Expr::Const(c)), &plan).unwrap();
        prop_assert_eq!(m.mean, c);
        prop_assert_eq!(m.stderr, 0.0);
    }

    #[test]
    fn graphic_mean_is_symmetric(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        prop_assume!(t1 != t2);
        let s = handle("sin(x)*exp(x/3) + x^3");
        let forward = graphic_mean(&s, t1, t2).unwrap();
        let backward = graphic_mean(&s, t2, t1).unwrap();
        prop_assert_eq!(forward.to_bits(), backward.to_bits());
    }

    #[test]
    fn derivative_is_affine_invariant(
        alpha in -4.0f64..4.0,
        beta in -10.0f64..10.0,
        t in 0.1f64..2.0,
        which in 0usize..3,
    ) {
        let base = ["x^2", "sin(x)", "exp(x)"][which];
        // A fixed secant schedule: with the default tolerance-driven stop the
        // stopping index itself depends on alpha.
        let opts = DerivativeOptions { tol: 0.0, max_iter: 12, ..DerivativeOptions::default() };
        let plain = derivative_at(&handle(base), t, &opts).unwrap().value;
        let affine = derivative_at(&handle(&format!("({alpha})*({base}) + ({beta})")), t, &opts)
            .unwrap()
            .value;
        prop_assert!((affine - alpha * plain).abs() <= 1e-9, "{} vs {}", affine, alpha * plain);
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_monotone_between(
        ys in prop::collection::vec(-100.0f64..100.0, 2..20),
        frac in 0.0f64..1.0,
    ) {
        let pairs: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 * 1.5, y)).collect();
        let t = TabularFunction::from_pairs(&pairs, "prop").unwrap();
        for &(x, y) in &pairs {
            prop_assert_eq!(tabular::interpolate(&t, x).unwrap(), y);
        }
        for w in pairs.windows(2) {
            let x = w[0].0 + frac * (w[1].0 - w[0].0);
            let v = tabular::interpolate(&t, x).unwrap();
            let (lo, hi) = if w[0].1 <= w[1].1 { (w[0].1, w[1].1) } else { (w[1].1, w[0].1) };
            prop_assert!(lo <= v && v <= hi);
        }
    }

    #[test]
    fn tabular_mean_ignores_row_order(
        rows in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..40),
        seed in any::<u64>(),
    ) {
        let mut unique = rows.clone();
        unique.sort_by(|a, b| a.0.total_cmp(&b.0));
        unique.dedup_by(|a, b| a.0 == b.0);
        let mut shuffled = unique.clone();
        // Deterministic shuffle driven by the seed.
        let len = shuffled.len();
        for i in (1..len).rev() {
            let j = (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        let a = TabularFunction::from_pairs(&unique, "a").unwrap();
        let b = TabularFunction::from_pairs(&shuffled, "b").unwrap();
        prop_assert_eq!(tabular::tabular_mean(&a).mean, tabular::tabular_mean(&b).mean);
    }

    #[test]
    fn csv_round_trip_preserves_values(
        rows in prop::collection::vec((-1e9f64..1e9, -1e9f64..1e9), 1..30),
    ) {
        let mut unique = rows;
        unique.sort_by(|a, b| a.0.total_cmp(&b.0));
        unique.dedup_by(|a, b| a.0 == b.0);
        let t = TabularFunction::from_pairs(&unique, "rt").unwrap();
        let back = tabular::load_csv(t.to_csv().as_bytes(), "rt").unwrap();
        prop_assert_eq!(back.xs(), t.xs());
        prop_assert_eq!(back.ys(), t.ys());
    }

    #[test]
    fn antiderivative_of_non_negative_function_is_non_decreasing(
        shift in 0.0f64..3.0,
        power in 0u32..5,
        which in 0usize..3,
        x_max in 0.5f64..4.0,
        grid in 2usize..40,
        seed in any::<u64>(),
    ) {
        let text = match which {
            0 => format!("(x + {shift})^{power}"),
            1 => format!("exp(x - {shift})"),
            _ => format!("sqrt(x) + abs({shift} - 1)"),
        };
        let f = handle(&text);
        for template in [Sampling::Uniform { n: 200 }, Sampling::Random { n: 200, seed }] {
            let g = antiderivative_grid(&f, 0.0, x_max, grid, &template).unwrap();
            prop_assert!(g.values.windows(2).all(|w| w[0] <= w[1]), "{:?}", g.values);
        }
    }
}

#[test]
fn ftc_consistency_for_builtin_pairs() {
    for pair in builtin_da_table() {
        let iv = pair.interval;
        let (c, d) = (iv.a(), iv.b());
        let exact = ftc_evaluate(&pair.antiderivative, c, d).unwrap();
        let plan = SamplePlan::uniform(iv, 100_000).unwrap();
        let approx = integral(&FunctionHandle::Expr(pair.derivative.clone()), &plan)
            .unwrap()
            .value;
        assert!(
            (approx - exact).abs() <= 1e-3 * (1.0 + exact.abs()),
            "{}: {approx} vs {exact}",
            pair.name
        );
    }
}

#[test]
fn lln_band_and_stderr_scaling() {
    let f = handle("x^2");
    let iv = Interval::new(0.0, 1.0).unwrap();
    let sigma = (4.0f64 / 45.0).sqrt();
    for seed in SHIPPED_SEEDS {
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            let m = function_mean(&f, &SamplePlan::random(iv, n, seed).unwrap()).unwrap();
            assert!((m.mean - 1.0 / 3.0).abs() <= 4.0 * m.stderr, "seed {seed} n {n}");
            assert!((m.mean - 1.0 / 3.0).abs() <= 4.0 * sigma / (n as f64).sqrt());
        }
        let small = function_mean(&f, &SamplePlan::random(iv, 1_000, seed).unwrap()).unwrap();
        let large = function_mean(&f, &SamplePlan::random(iv, 100_000, seed).unwrap()).unwrap();
        let ratio = large.stderr / small.stderr;
        assert!((0.08..=0.12).contains(&ratio), "seed {seed}: {ratio}");
    }
}
