//! Oracles shared by the integration tests.
#![allow(dead_code)]

use fluidsymp::expr;
use fluidsymp::jets::{Jet, MultiIndex, Point};
use fluidsymp::scenarios::{Builtin, ScenarioSpec};
use fluidsymp::verify::{halton_points, SampleBox};

pub type Closure = fn(f64, f64, f64, f64) -> f64;

/// Input, canonical printed form, and a hand-written evaluator.
pub const CORPUS: [(&str, &str, Closure); 20] = [
    ("1+2*3", "1.0 + 2.0 * 3.0", |_, _, _, _| 7.0),
    ("2^3^2", "2.0^3.0^2.0", |_, _, _, _| 512.0),
    ("(1+2)*3", "(1.0 + 2.0) * 3.0", |_, _, _, _| 9.0),
    ("x - (y - z)", "x - (y - z)", |_, x, y, z| x - (y - z)),
    ("x-y-z", "x - y - z", |_, x, y, z| x - y - z),
    ("x/(y*z)", "x / (y * z)", |_, x, y, z| x / (y * z)),
    ("x/y*z", "x / y * z", |_, x, y, z| x / y * z),
    ("-x^2", "-x^2.0", |_, x, _, _| x * x),
    ("-(x^2)", "-(x^2.0)", |_, x, _, _| -(x * x)),
    ("sin(t)*y", "sin(t) * y", |t, _, y, _| t.sin() * y),
    ("exp(-t^2)", "exp(-t^2.0)", |t, _, _, _| (t * t).exp()),
    ("sqrt(x^2+y^2+z^2)", "sqrt(x^2.0 + y^2.0 + z^2.0)", |_, x, y, z| (x * x + y * y + z * z).sqrt()),
    ("cos(x)^2 + sin(x)^2", "cos(x)^2.0 + sin(x)^2.0", |_, _, _, _| 1.0),
    ("x^-1", "x^-1.0", |_, x, _, _| 1.0 / x),
    ("(x+y)^2", "(x + y)^2.0", |_, x, y, _| (x + y) * (x + y)),
    ("2^(1/2)", "2.0^(1.0 / 2.0)", |_, _, _, _| std::f64::consts::SQRT_2),
    ("  t *  ( x + 1.5e-1 ) ", "t * (x + 0.15)", |t, x, _, _| t * (x + 0.15)),
    ("x - -y", "x - -y", |_, x, y, _| x + y),
    ("x*(y/z)", "x * (y / z)", |_, x, y, z| x * (y / z)),
    ("exp(sin(x*y) - cos(z)/2)", "exp(sin(x * y) - cos(z) / 2.0)", |_, x, y, z| ((x * y).sin() - z.cos() / 2.0).exp()),
];

pub const CORPUS_POINT: Point = [0.3, 0.7, -0.4, 1.1];

/// Failures of the golden corpus, empty when it passes.
pub fn corpus_failures() -> Vec<String> {
    let mut bad = Vec::new();
    let p = CORPUS_POINT;
    for (input, canonical, oracle) in CORPUS {
        let ast = match expr::parse(input) {
            Ok(a) => a,
            Err(e) => {
                bad.push(format!("{input}: {e}"));
                continue;
            }
        };
        let printed = ast.to_string();
        if printed != canonical {
            bad.push(format!("{input}: printed `{printed}`, want `{canonical}`"));
        }
        if expr::parse(&printed).as_ref() != Ok(&ast) {
            bad.push(format!("{input}: reparse of `{printed}` differs"));
        }
        let expected = oracle(p[0], p[1], p[2], p[3]);
        let direct = ast.eval_f64(p).unwrap();
        let jet = ast.eval_jet_at(p, 3).unwrap().value();
        if (direct - expected).abs() > 1e-13 * expected.abs().max(1.0) {
            bad.push(format!("{input}: value {direct}, want {expected}"));
        }
        if (jet - direct).abs() > 1e-13 * direct.abs().max(1.0) {
            bad.push(format!("{input}: jet value {jet} vs {direct}"));
        }
    }
    bad
}

/// Worst relative gap between jet partials of order 1 and 2 of `v` and `p`
/// and central differences with step `h`, over `n` points of each built-in.
pub fn finite_difference_gap(n: usize, h: f64) -> (f64, String) {
    let mut indices = Vec::new();
    for a in 0..4 {
        indices.push(MultiIndex::unit(a));
        for b in a..4 {
            let mut e = [0u8; 4];
            e[a] += 1;
            e[b] += 1;
            indices.push(MultiIndex(e));
        }
    }
    let mut worst = (0.0, String::new());
    for b in Builtin::ALL {
        let spec = ScenarioSpec::from_builtin(b);
        let bx = SampleBox(spec.default_box());
        for p in halton_points(&bx, n, 7) {
            let s = spec.evaluate(p, 2).unwrap();
            let fields: [&Jet; 4] = [&s.v[0], &s.v[1], &s.v[2], &s.p];
            for (c, jet) in fields.iter().enumerate() {
                let f = |q: Point| -> f64 {
                    let s = spec.evaluate(q, 2).unwrap();
                    [s.v[0].value(), s.v[1].value(), s.v[2].value(), s.p.value()][c]
                };
                for k in &indices {
                    let exact = jet.partial(*k).unwrap();
                    let fd = central_difference(&f, p, *k, h);
                    let gap = (exact - fd).abs() / exact.abs().max(1.0);
                    if gap > worst.0 {
                        worst = (gap, format!("{} field {c} {:?} at {p:?}", b.name(), k.0));
                    }
                }
            }
        }
    }
    worst
}

fn shifted(p: Point, steps: &[(usize, f64)]) -> Point {
    let mut q = p;
    for &(a, d) in steps {
        q[a] += d;
    }
    q
}

fn central_difference(f: &dyn Fn(Point) -> f64, p: Point, k: MultiIndex, h: f64) -> f64 {
    let axes: Vec<usize> = (0..4).flat_map(|a| std::iter::repeat(a).take(k.0[a] as usize)).collect();
    match axes[..] {
        [a] => (f(shifted(p, &[(a, h)])) - f(shifted(p, &[(a, -h)]))) / (2.0 * h),
        [a, b] if a == b => (f(shifted(p, &[(a, h)])) - 2.0 * f(p) + f(shifted(p, &[(a, -h)]))) / (h * h),
        [a, b] => {
            (f(shifted(p, &[(a, h), (b, h)])) - f(shifted(p, &[(a, h), (b, -h)])) - f(shifted(p, &[(a, -h), (b, h)]))
                + f(shifted(p, &[(a, -h), (b, -h)])))
                / (4.0 * h * h)
        }
        _ => unreachable!("orders 1 and 2 only"),
    }
}

/// Rigid rotation over a quarter period from `(1, 0, 0)` with step near `h`:
/// distance of the end point from `(0, 1, 0)`.
pub fn rotation_quarter_error(h: f64) -> f64 {
    use fluidsymp::trace::{integrate, CurveKind};
    let spec = ScenarioSpec::builtin("columnar_vortex").unwrap().with_param("w0", 0.0).unwrap();
    let quarter = std::f64::consts::FRAC_PI_2 / spec.param("omega");
    let steps = (quarter / h).round() as usize;
    let c = integrate(&spec, CurveKind::Trajectory, [0.0, 1.0, 0.0, 0.0], quarter / steps as f64, steps, None).unwrap();
    let e = c.last_point();
    (e[1] * e[1] + (e[2] - 1.0).powi(2) + e[3] * e[3]).sqrt()
}

fn end_point(spec: &ScenarioSpec, start: Point, duration: f64, steps: usize) -> Point {
    use fluidsymp::trace::{integrate, CurveKind};
    integrate(spec, CurveKind::Trajectory, start, duration / steps as f64, steps, None)
        .unwrap()
        .last_point()
}

fn distance(a: Point, b: Point) -> f64 {
    (1..4).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

/// `err(h) / err(h/2)` on a boosted-vortex trajectory, errors measured
/// against the `h/8` solution.
pub fn rk4_self_convergence_ratio() -> f64 {
    let spec = ScenarioSpec::builtin("boosted_vortex").unwrap();
    let start = [0.0, 0.4, -0.3, 0.2];
    let (duration, n) = (2.0, 20);
    let reference = end_point(&spec, start, duration, 8 * n);
    let coarse = distance(end_point(&spec, start, duration, n), reference);
    let fine = distance(end_point(&spec, start, duration, 2 * n), reference);
    coarse / fine
}

/// Terminal error ratio of frozen-time streamline stitching when the slab
/// width is halved, on the accelerating vortex.
pub fn stitching_ratio() -> f64 {
    use fluidsymp::trace::reconstruct_trajectory;
    let spec = ScenarioSpec::builtin("accelerating_vortex").unwrap();
    let start = [0.0, 0.5, 0.2, -0.1];
    let wide = reconstruct_trajectory(&spec, start, 0.1, 10, 1e-3).unwrap();
    let narrow = reconstruct_trajectory(&spec, start, 0.05, 20, 1e-3).unwrap();
    wide.terminal_error / narrow.terminal_error
}

/// Largest relative drift of `α` and of `w·∇α` along accelerating-vortex
/// trajectories.
pub fn invariant_drift() -> (f64, f64) {
    use fluidsymp::trace::{integrate, CurveKind};
    let spec = ScenarioSpec::builtin("accelerating_vortex").unwrap();
    let starts = [[0.0, 0.5, 0.2, -0.1], [0.3, -1.0, 0.4, 0.8], [1.0, 0.1, -1.2, 0.0]];
    let (mut da, mut dl) = (0.0f64, 0.0f64);
    for start in starts {
        let c = integrate(&spec, CurveKind::Trajectory, start, 1e-3, 1000, None).unwrap();
        let at = |p: Point| {
            let s = spec.evaluate(p, 2).unwrap();
            (s.alpha.value(), s.liouville_density.value())
        };
        let (a0, l0) = at(start);
        for (_, p) in c.samples.iter().step_by(50) {
            let (a, l) = at(*p);
            da = da.max((a - a0).abs() / a0.abs().max(1.0));
            dl = dl.max((l - l0).abs() / l0.abs().max(1.0));
        }
    }
    (da, dl)
}
