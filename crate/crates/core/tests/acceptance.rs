//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{random_degrees, random_mesh, random_point, sup_diff, ExtendedSpline, Poly, Wave};
use hhqi::grid::{Degrees, UniformGrid};
use hhqi::harness::comparison::{comparison_hqi, comparison_qi};
use hhqi::harness::counting::{tensor_evaluations, Operator};
use hhqi::harness::experiment::{run_experiment, ExperimentConfig, ExperimentReport, QiKind};
use hhqi::harness::functions::{builtin, HermiteOf, TestFunction, ValuesOf};
use hhqi::harness::tables::{reference_table, Table};
use hhqi::hqi::{hierarchical_qi, region_c, sampled_max_rect, tensor_qi_from, HighOrderNorms, ErrorConstants};
use hhqi::mesh::HierarchicalMesh;
use hhqi::provider::{fd_hermite_provider, FnSource, HermiteProvider, SamplePoint, Stencil};
use hhqi::refine::StopReason;
use hhqi::tensor::{bound_constants, functional_support, coefficient_bound, HermiteNorms};
use hhqi::thb::{active_indices, support_cells, ThbBasis};
use hhqi::uniform_qi::{qi_coefficients, qi_coefficients_exact};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Experiment reports are shared between criteria.
#[derive(Default)]
struct Runs {
    cache: BTreeMap<String, ExperimentReport>,
}

impl Runs {
    fn get(&mut self, function: &str, d: usize, qi: QiKind) -> &ExperimentReport {
        let key = format!("{function}_{}_d{d}", qi.name());
        self.cache.entry(key).or_insert_with(|| {
            let cfg = ExperimentConfig::from_pairs([
                ("function", function),
                ("degrees", &format!("{d},{d}")),
                ("qi", qi.name()),
                ("levels", "5"),
            ])
            .unwrap();
            run_experiment(&cfg).unwrap()
        })
    }
}

fn reference(name: &str) -> Table {
    reference_table(name).unwrap_or_else(|| panic!("missing reference table {name}"))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Largest relative deviation of an error column from the reference, with
/// the row where it happens.
fn worst(rows: &[hhqi::harness::experiment::ErrorRow], table: &Table, col: &str) -> (f64, usize) {
    let mut out = (0.0, 0);
    for r in rows {
        let got = match col {
            "err_sup" => r.errors.sup,
            "err_x" => r.errors.x,
            "err_y" => r.errors.y,
            _ => r.errors.xy,
        };
        let want = table.get(r.m as i64, col).unwrap();
        let e = rel(got, want);
        if e > out.0 {
            out = (e, r.m);
        }
    }
    out
}

fn c1_table_coefficients(_: &mut Runs) -> Outcome {
    let r = |n: i64, m: i64| Ratio::new(n, m);
    let expected = [
        (2, vec![r(1, 2), r(1, 2)], vec![r(-1, 4), r(1, 4)]),
        (3, vec![r(-1, 2), r(4, 2), r(-1, 2)], vec![r(1, 6), r(0, 6), r(-1, 6)]),
        (4, vec![r(5, 12), r(1, 12), r(1, 12), r(5, 12)], vec![r(-5, 48), r(-41, 48), r(41, 48), r(5, 48)]),
    ];
    let mut ok = true;
    for (d, a, b) in expected {
        let got = qi_coefficients_exact(d).unwrap();
        ok &= got.alpha == a && got.beta == b;
        let f = qi_coefficients::<f64>(d).unwrap();
        ok &= f.alpha.iter().zip(&a).all(|(x, q)| *x == *q.numer() as f64 / *q.denom() as f64);
    }
    Outcome::new(ok, "exact rational alpha/beta for d = 2, 3, 4")
}

fn c2_tensor_errors(runs: &mut Runs) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 2..=4 {
        let rep = runs.get("f1", d, QiKind::Hier);
        let t = reference(&format!("f1_hier_d{d}_tensor"));
        let (e, m) = worst(&rep.tensor, &t, "err_sup");
        ok &= e <= 0.01;
        parts.push(format!("d={d} max rel {e:.1e} (M={m}), M=5 {:.3e}", rep.tensor[4].errors.sup));
    }
    Outcome::new(ok, format!("f1 ||e|| within 1%: {}", parts.join("; ")))
}

fn c3_derivative_errors(runs: &mut Runs) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 2..=4 {
        let rep = runs.get("f1", d, QiKind::Hier);
        let t = reference(&format!("f1_hier_d{d}_tensor"));
        for col in ["err_x", "err_y", "err_xy"] {
            let (e, m) = worst(&rep.tensor, &t, col);
            ok &= e <= 0.02;
            parts.push(format!("d={d} {col} {e:.1e}@M{m}"));
        }
    }
    Outcome::new(ok, format!("f1 derivative errors within 2%: {}", parts.join(", ")))
}

fn c4_f2_tensor(runs: &mut Runs) -> Outcome {
    let rep = runs.get("f2", 3, QiKind::Hier);
    let t = reference("f2_hier_d3_tensor");
    let (e, m) = worst(&rep.tensor, &t, "err_sup");
    let series: Vec<String> = rep.tensor.iter().map(|r| format!("{:.3e}", r.errors.sup)).collect();
    Outcome::new(e <= 0.01, format!("f2 d=(3,3) series [{}], max rel {e:.1e} (M={m})", series.join(", ")))
}

fn c5_comparison_series(runs: &mut Runs) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 2..=4 {
        let rep = runs.get("f1", d, QiKind::That);
        let t = reference(&format!("f1_that-hier_d{d}_tensor"));
        let (e, m) = worst(&rep.tensor, &t, "err_sup");
        ok &= e <= 0.01;
        parts.push(format!("d={d} max rel {e:.1e} (M={m}), M=5 {:.3e}", rep.tensor[4].errors.sup));
    }
    Outcome::new(ok, format!("f1 Q-hat within 1%: {}", parts.join("; ")))
}

fn c6_evaluation_counts(runs: &mut Runs) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut cells = 0;
    for d in 2..=4 {
        let deg = Degrees::square(d).unwrap();
        for (qi, op, table) in [
            (QiKind::Hier, Operator::Hermite, format!("f1_hier_d{d}_tensor")),
            (QiKind::That, Operator::Collocation, format!("f1_that-hier_d{d}_tensor")),
        ] {
            let t = reference(&table);
            let rep = runs.get("f1", d, qi);
            for r in &rep.tensor {
                let n = 8usize << (r.m - 1);
                // independent closed forms
                let formula = match op {
                    Operator::Hermite => 4 * (n + 2 * d - 1) * (n + 2 * d - 1),
                    Operator::Collocation => (d * (n + d) + 1) * (d * (n + d) + 1),
                };
                let counted = r.evals.unwrap();
                let table = t.get(r.m as i64, "evals").unwrap() as usize;
                cells += 1;
                ok &= formula == counted && formula == tensor_evaluations(op, deg, n, n);
                if table != formula {
                    // four values per point: a count that is not a multiple
                    // of four cannot come from this operator
                    let misprint = op == Operator::Hermite && table % 4 != 0 && table.abs_diff(formula) <= 2;
                    ok &= misprint;
                    notes.push(format!(
                        "{} d={d} M={}: table {table} vs {formula}{}",
                        qi.tensor_kind().name(),
                        r.m,
                        if misprint { " (table value not a multiple of 4, treated as misprint)" } else { "" }
                    ));
                }
            }
        }
    }
    let note = if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) };
    Outcome::new(ok, format!("{cells} tensor rows, closed form == counted queries{note}"))
}

fn c7_hierarchical_equality(runs: &mut Runs) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (f, d) in [("f1", 2), ("f1", 3), ("f1", 4), ("f2", 3)] {
        let rep = runs.get(f, d, QiKind::Hier);
        let table = reference(&format!("{f}_hier_d{d}_hier"));
        let tolerance_stop = rep.stop == Some(StopReason::Tolerance);
        let mut same = true;
        for h in &rep.hier {
            let t = &rep.tensor[h.m - 1];
            same &= format!("{:.2e}", h.errors.sup) == format!("{:.2e}", t.errors.sup);
        }
        let last = rep.hier.last().unwrap();
        let dim_v = rep.tensor.last().unwrap().dim_tensor;
        let small = last.m == 5 && last.dim_hier.unwrap() * 2 <= dim_v;
        // equality is only claimed for runs that reached the tolerance
        ok &= (!tolerance_stop || same) && small;
        parts.push(format!(
            "{f} d={d}: {:?}, e_H {:.3e} vs e {:.3e}, dim {} (table {}) of {}",
            rep.stop.unwrap(),
            last.errors.sup,
            rep.tensor[last.m - 1].errors.sup,
            last.dim_hier.unwrap(),
            table.get(5, "dim_hier").unwrap(),
            dim_v
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn c8_polynomial_reproduction(_: &mut Runs) -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst = 0f64;
    for _ in 0..20 {
        let deg = random_degrees(&mut rng);
        let p = Poly::random(&mut rng, deg);
        let mesh = random_mesh(&mut rng, 4, 3, 0.3);
        let exact = |x: f64, y: f64| p.value(x, y);
        let grid = mesh.grid(rng.gen_range(0..mesh.depth()));
        let q = tensor_qi_from(&grid, deg, &HermiteOf(&p)).unwrap();
        let qh = comparison_qi(&grid, deg, &ValuesOf(&p)).unwrap();
        let qhier = hierarchical_qi(&mesh, deg, &HermiteOf(&p)).unwrap();
        let qhhier = comparison_hqi(&mesh, deg, &ValuesOf(&p)).unwrap();
        worst = worst
            .max(sup_diff(41, |x, y| q.eval(x, y, 0, 0).unwrap(), exact))
            .max(sup_diff(41, |x, y| qh.eval(x, y, 0, 0).unwrap(), exact))
            .max(sup_diff(41, |x, y| qhier.eval(x, y, 0, 0).unwrap(), exact))
            .max(sup_diff(41, |x, y| qhhier.eval(x, y, 0, 0).unwrap(), exact));
    }
    Outcome::new(worst <= 1e-9, format!("20 polynomials, Q/Q-hat/Q_H/Q-hat_H max error {worst:.1e} (<= 1e-9)"))
}

fn c9_projectors(_: &mut Runs) -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst = 0f64;
    for _ in 0..20 {
        let deg = random_degrees(&mut rng);
        let n = rng.gen_range(3..=6);
        let s = ExtendedSpline::random(&mut rng, n, deg);
        let q = tensor_qi_from(&s.inner, deg, &HermiteOf(&s)).unwrap();
        let qh = comparison_qi(&s.inner, deg, &ValuesOf(&s)).unwrap();
        for ((j, i), v) in q.coeffs.iter() {
            worst = worst.max((v - s.coefficient(j, i)).abs());
            worst = worst.max((qh.coeffs.at(j, i) - s.coefficient(j, i)).abs());
        }
    }
    // single-level meshes: Q_H must be Q, bit for bit
    let mut collapse = true;
    for d in 2..=4 {
        let deg = Degrees::square(d).unwrap();
        let f = builtin::<f64>("f1").unwrap();
        let mesh = HierarchicalMesh::from_domains(common::base(8), &[]).unwrap();
        let h = hierarchical_qi(&mesh, deg, &HermiteOf(f.as_ref())).unwrap();
        let t = tensor_qi_from(&common::base(8), deg, &HermiteOf(f.as_ref())).unwrap();
        collapse &= h.level_spline(0).coeffs == t.coeffs;
    }
    Outcome::new(
        worst <= 1e-10 && collapse,
        format!("20 random splines, max coefficient error {worst:.1e} (<= 1e-10); single-level Q_H == Q: {collapse}"),
    )
}

fn c10_thb_invariants(_: &mut Runs) -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let (mut pu, mut neg) = (0f64, 0f64);
    let (mut dims_ok, mut count_ok) = (true, true);
    for _ in 0..10 {
        let deg = random_degrees(&mut rng);
        let depth = rng.gen_range(2..=4);
        let mesh = random_mesh(&mut rng, 4, depth, 0.35);
        let basis = ThbBasis::new(&mesh, deg).unwrap();
        // brute force A^l from the cell sets
        let mut brute = 0;
        for l in 0..mesh.depth() {
            let g = mesh.grid(l);
            for (j, i) in hhqi::tensor::coefficient_box(&g, deg).iter() {
                let s = support_cells(deg, j, i);
                let cells: Vec<(i64, i64)> = s
                    .iter()
                    .map(|(a, b)| (b, a))
                    .filter(|&(ci, cj)| ci >= 0 && cj >= 0 && ci < g.n1() as i64 && cj < g.n2() as i64)
                    .collect();
                let inside = cells.iter().all(|&(ci, cj)| mesh.in_domain(l, ci, cj));
                let deeper = cells.iter().all(|&(ci, cj)| mesh.is_refined(l, ci, cj));
                brute += (inside && !deeper) as usize;
            }
        }
        let per_level: usize = active_indices(&mesh, deg).levels.iter().map(Vec::len).sum();
        dims_ok &= basis.dim() == brute && per_level == brute;
        let m = basis.admissibility_class();
        let cap = m * deg.local_count();
        count_ok &= mesh.all_active_cells().iter().all(|&c| basis.functions_on(c).len() <= cap);
        for _ in 0..1000 {
            let (x, y) = random_point(&mut rng);
            let vals = basis.eval(x, y, 0, 0).unwrap();
            let s: f64 = vals.iter().map(|v| v.1).sum();
            pu = pu.max((s - 1.0).abs());
            neg = neg.max(vals.iter().map(|v| -v.1).fold(0.0, f64::max));
        }
    }
    let ok = pu <= 1e-12 && neg <= 1e-12 && dims_ok && count_ok;
    Outcome::new(
        ok,
        format!(
            "10 meshes x 1000 points: |sum T - 1| {pu:.1e}, min T >= -{neg:.1e}; dim == sum #A^l: {dims_ok}; per-cell count <= m(d1+1)(d2+1): {count_ok}"
        ),
    )
}

fn c11_bounds(runs: &mut Runs) -> Outcome {
    const N: usize = 13;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, d) in [("f1", 2), ("f1", 3), ("f1", 4), ("f2", 3)] {
        let rep = runs.get(name, d, QiKind::Hier);
        let mesh = rep.meshes.last().unwrap().clone();
        let deg = Degrees::square(d).unwrap();
        let f = builtin::<f64>(name).unwrap();
        let f = f.as_ref();
        let spline = hierarchical_qi(&mesh, deg, &HermiteOf(f)).unwrap();
        let basis = ThbBasis::new(&mesh, deg).unwrap();
        let m = basis.admissibility_class();
        let consts = ErrorConstants::new(deg, m, mesh.base()).unwrap();
        let kappa = bound_constants::<f64>(deg).unwrap();
        let norms_on = |r: &hhqi::grid::Rect<f64>| HermiteNorms {
            f: sampled_max_rect(r, N, |x, y| f.deriv(x, y, 0, 0)),
            fx: sampled_max_rect(r, N, |x, y| f.deriv(x, y, 1, 0)),
            fy: sampled_max_rect(r, N, |x, y| f.deriv(x, y, 0, 1)),
            fxy: sampled_max_rect(r, N, |x, y| f.deriv(x, y, 1, 1)),
        };
        let max_norms = |a: HermiteNorms<f64>, b: HermiteNorms<f64>| HermiteNorms {
            f: a.f.max(b.f),
            fx: a.fx.max(b.fx),
            fy: a.fy.max(b.fy),
            fxy: a.fxy.max(b.fxy),
        };
        // coefficient bound on every active functional; norms per functional support feed the cell bound
        let mut coef = (0usize, 0usize);
        let mut lam_norms = Vec::with_capacity(basis.functions.len());
        for tf in &basis.functions {
            let g = mesh.grid(tf.level);
            let norms = norms_on(&functional_support(tf.j, tf.i, deg, &g));
            let lambda = spline.coefficient(tf.level, tf.j, tf.i).unwrap();
            coef.0 += 1;
            coef.1 += (lambda.abs() <= coefficient_bound(&kappa, g.hx(), g.hy(), &norms) * (1.0 + 1e-12)) as usize;
            lam_norms.push(norms);
        }
        let (mut l2, mut t1, mut cells) = (0usize, 0usize, 0usize);
        let mut margin = f64::INFINITY;
        for c in mesh.all_active_cells() {
            cells += 1;
            let rect = mesh.cell_rect(c);
            let mut norms = norms_on(&rect);
            for &fid in basis.functions_on(c) {
                norms = max_norms(norms, lam_norms[fid]);
            }
            let qmax = sampled_max_rect(&rect, 9, |x, y| {
                let (tx, ty) = mesh.local_coords(c, x, y);
                spline.eval_in_cell(c, tx.clamp(0.0, 1.0), ty.clamp(0.0, 1.0), 0, 0)
            });
            let emax = sampled_max_rect(&rect, 9, |x, y| {
                let (tx, ty) = mesh.local_coords(c, x, y);
                f.value(x, y) - spline.eval_in_cell(c, tx.clamp(0.0, 1.0), ty.clamp(0.0, 1.0), 0, 0)
            });
            let g = mesh.grid(c.level);
            l2 += (qmax <= consts.cell_bound(g.hx(), g.hy(), &norms) * (1.0 + 1e-12)) as usize;
            let r = region_c(&basis, c).bounding;
            let high = HighOrderNorms {
                fx_top: sampled_max_rect(&r, N, |x, y| f.deriv(x, y, d + 1, 0)),
                fy_top: sampled_max_rect(&r, N, |x, y| f.deriv(x, y, 0, d + 1)),
                fxy_top: sampled_max_rect(&r, N, |x, y| f.deriv(x, y, d + 1, d + 1)),
            };
            let bound = consts.error_bound(deg, g.hx(), g.hy(), &high);
            t1 += (emax <= bound) as usize;
            if emax > 0.0 {
                margin = margin.min(bound / emax);
            }
        }
        ok &= coef.1 == coef.0 && l2 == cells && t1 == cells;
        parts.push(format!(
            "{name} d={d} m={m}: coef {}/{}, cell {l2}/{cells}, error {t1}/{cells} (min ratio {margin:.1e})",
            coef.1, coef.0
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn c12_finite_differences(runs: &mut Runs) -> Outcome {
    let rep = runs.get("f1", 3, QiKind::FdHier);
    let t = reference("f1_fd-hier_d3_hier");
    let (e, m) = worst(&rep.hier, &t, "err_sup");
    let series_ok = e <= 0.10 && rep.hier.len() == 5;
    // derivative synthesis rate under step halving on a smooth function
    let wave = Wave;
    let src = FnSource(|x: f64, y: f64| wave.value(x, y));
    let base = common::base(8);
    let fd = fd_hermite_provider(src, base, Degrees::square(3).unwrap(), (3, 3)).unwrap();
    let (x, y) = (0.25, -0.5);
    let err_at = |level: usize| {
        let g: UniformGrid<f64> = base.at_level(level);
        let s = 1i64 << level;
        let p = SamplePoint::lattice(&g, 5 * s, 2 * s);
        assert!((p.x - x).abs() < 1e-15 && (p.y - y).abs() < 1e-15);
        let h = fd.hermite(&p).unwrap();
        ((h.fx - wave.deriv(x, y, 1, 0)).abs(), (h.fxy - wave.deriv(x, y, 1, 1)).abs())
    };
    let (e3, e4) = (err_at(3), err_at(4));
    let (rx, rxy) = (e3.0 / e4.0, e3.1 / e4.1);
    // bare stencil on a 1-d function
    let st = Stencil::first_derivative(3).unwrap();
    let w: Vec<f64> = st.weights_as();
    let d1 = |h: f64| {
        let v: f64 = w.iter().enumerate().map(|(k, wk)| wk * (0.3 + (st.start + k as i64) as f64 * h).exp()).sum();
        (v / h - 0.3f64.exp()).abs()
    };
    let rs = d1(0.02) / d1(0.01);
    let in_band = |r: f64| (r - 8.0).abs() <= 0.2 * 8.0;
    let ok = series_ok && in_band(rx) && in_band(rxy) && in_band(rs);
    Outcome::new(
        ok,
        format!(
            "Q^a_H f1 d=(3,3) max rel {e:.1e} (M={m}), M=5 {:.3e}; halving ratios: stencil {rs:.2}, f_x {rx:.2}, f_xy {rxy:.2} (8 +- 20%)",
            rep.hier.last().unwrap().errors.sup
        ),
    )
}

fn c13_convergence(runs: &mut Runs) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let f = Wave;
    for d in 2..=4 {
        let deg = Degrees::square(d).unwrap();
        let target = (1u32 << (d + 1)) as f64;
        // both levels measured on the same points, 4 per finest cell, so the
        // sampled maxima sit at matching positions inside the cells
        let n = 4 * (8 << 4) + 1;
        let err = |level: usize, hat: bool| {
            let g = common::base(8).at_level(level);
            let s = if hat {
                comparison_qi(&g, deg, &ValuesOf(&f)).unwrap()
            } else {
                tensor_qi_from(&g, deg, &HermiteOf(&f)).unwrap()
            };
            sup_diff(n, |x, y| s.eval(x, y, 0, 0).unwrap(), |x, y| f.value(x, y))
        };
        for hat in [false, true] {
            let r = err(3, hat) / err(4, hat);
            ok &= (r / target - 1.0).abs() <= 0.3;
            parts.push(format!("{} d={d} {r:.1}/{target}", if hat { "Q-hat" } else { "Q" }));
        }
        let rep = runs.get("f1", d, QiKind::Hier);
        let r = rep.tensor[3].errors.sup / rep.tensor[4].errors.sup;
        parts.push(format!("(f1 Q d={d} {r:.1}, not asserted)"));
    }
    Outcome::new(ok, format!("smooth wave, M=4 -> 5: {}", parts.join(", ")))
}

/// Operators outside criterion 7 whose tables also show equal columns.
fn equality_notes(runs: &mut Runs) -> Vec<String> {
    let mut out = Vec::new();
    for (f, d, qi) in [
        ("f1", 2, QiKind::ThatHier),
        ("f1", 3, QiKind::ThatHier),
        ("f1", 4, QiKind::ThatHier),
        ("f2", 3, QiKind::ThatHier),
        ("f1", 3, QiKind::FdHier),
        ("f2", 3, QiKind::FdHier),
    ] {
        let rep = runs.get(f, d, qi);
        let last = rep.hier.last().unwrap();
        let t = &rep.tensor[last.m - 1];
        let same = format!("{:.2e}", last.errors.sup) == format!("{:.2e}", t.errors.sup);
        out.push(format!(
            "{} {f} d={d}: e_H {:.3e} vs e {:.3e} ({}), dim {}",
            qi.name(),
            last.errors.sup,
            t.errors.sup,
            if same { "equal" } else { "differs" },
            last.dim_hier.unwrap()
        ));
    }
    out
}

fn main() {
    let criteria: [(&str, fn(&mut Runs) -> Outcome); 13] = [
        ("QI coefficient table", c1_table_coefficients),
        ("tensor errors f1", c2_tensor_errors),
        ("tensor derivative errors f1", c3_derivative_errors),
        ("tensor errors f2", c4_f2_tensor),
        ("comparison operator f1", c5_comparison_series),
        ("evaluation counts", c6_evaluation_counts),
        ("hierarchical equality", c7_hierarchical_equality),
        ("polynomial reproduction", c8_polynomial_reproduction),
        ("projectors", c9_projectors),
        ("THB invariants", c10_thb_invariants),
        ("bounds", c11_bounds),
        ("finite-difference variant", c12_finite_differences),
        ("convergence orders", c13_convergence),
    ];
    let started = Instant::now();
    let mut runs = Runs::default();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = check(&mut runs);
        failed += (!out.pass) as usize;
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if out.pass { "PASS" } else { "FAIL" },
            k + 1,
            out.detail,
            t.elapsed().as_secs_f64()
        );
    }
    for note in equality_notes(&mut runs) {
        println!("INFO    {note}");
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
