//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Set `ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero exit status.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use minkowski_gauge::bodies::{self, WeightMode};
use minkowski_gauge::chebyshev::{self, LinearForm};
use minkowski_gauge::convex::vector::{self, vector as v};
use minkowski_gauge::convex;
use minkowski_gauge::gauge::{self, Gauge};
use minkowski_gauge::oracles;
use minkowski_gauge::{Body, Vector};

struct Gate {
    failed: Vec<&'static str>,
}

struct Crit {
    name: &'static str,
    notes: Vec<String>,
    ok: bool,
}

impl Crit {
    fn new(name: &'static str) -> Self {
        Crit { name, notes: Vec::new(), ok: true }
    }

    fn check(&mut self, what: &str, ok: bool, detail: String) {
        if !ok {
            self.ok = false;
            self.notes.push(format!("FAILED {what}: {detail}"));
        } else {
            self.notes.push(format!("{what}: {detail}"));
        }
    }
}

impl Gate {
    fn report(&mut self, c: Crit, started: Instant) {
        let tag = if c.ok { "PASS" } else { "FAIL" };
        println!("{tag} {} ({:.1}s)", c.name, started.elapsed().as_secs_f64());
        for n in &c.notes {
            println!("    {n}");
        }
        if !c.ok {
            self.failed.push(c.name);
        }
    }
}

fn triangle() -> Body {
    Body::vpolytope(&[vec![10.0, 10.0], vec![16.0, 10.0], vec![10.0, 16.0]]).unwrap()
}

fn random_polygon(rng: &mut ChaCha8Rng) -> Body {
    let n = rng.random_range(3..9);
    Body::V(bodies::random_polygon(rng, n))
}

fn interior_point(k: &Body, rng: &mut ChaCha8Rng) -> Vector {
    let vs = k.vertices().unwrap();
    let w: Vec<f64> = vs.iter().map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
    let s: f64 = w.iter().sum();
    vs.iter().zip(&w).fold(vector::zeros(k.dim()), |a, (u, wi)| a + u * (wi / s))
}

fn box_point(k: &Body, rng: &mut ChaCha8Rng, spread: f64) -> Vector {
    let d = k.dim();
    let mut x = vector::zeros(d);
    for j in 0..d {
        let e = vector::unit(d, j);
        let hi = k.support(&e).unwrap();
        let lo = -k.support(&(-&e)).unwrap();
        let (c, r) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
        x[j] = c + spread * r * rng.random_range(-1.0..1.0);
    }
    x
}

fn exterior_point(k: &Body, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let x = box_point(k, rng, 3.0);
        if gauge::alpha(k, &x).unwrap().alpha > 1.0 + 1e-3 {
            return x;
        }
    }
}

fn criterion_triangle(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("triangle_counterexample");
    let t = triangle();
    let w = convex::global_width(&t).unwrap();
    c.check("width", (w.value - 3.0 * 2f64.sqrt()).abs() <= 1e-9, format!("{} vs 3√2", w.value));
    let far = convex::far_radius(&t).unwrap();
    c.check("far radius", (far.value - 356f64.sqrt()).abs() <= 1e-9, format!("{} vs √356", far.value));
    let mut hex = convex::central_symm(&t).polygon().unwrap();
    let mut expected: Vec<[f64; 2]> = vec![[3.0, 0.0], [0.0, 3.0], [-3.0, 3.0], [-3.0, 0.0], [0.0, -3.0], [3.0, -3.0]];
    let key = |p: &[f64; 2]| (p[0] as i64, p[1] as i64);
    hex.sort_by_key(key);
    expected.sort_by_key(key);
    c.check("central symmetral hexagon", hex == expected, format!("{hex:?}"));
    let lvl = gauge::level_set(&t, 1.0 / 3.0).unwrap();
    let spread = vector::circle_directions(64, 0.05)
        .iter()
        .map(|d| (lvl.support_point(d).unwrap() - v(&[12.0, 12.0])).norm())
        .fold(0.0, f64::max);
    c.check("level set at 1/3 is {(12,12)}", !lvl.empty && spread <= 1e-8, format!("spread {spread:.2e}"));
    let dist = (v(&[0.0, -1.0]) - v(&[12.0, 12.0])).norm();
    let bound = far.value - w.value / 2.0;
    c.check(
        "distance from (0,-1)",
        (dist - 313f64.sqrt()).abs() <= 1e-9 && dist > bound,
        format!("{dist} vs √313, exceeds D - w/2 = {bound}"),
    );
    let lam_c = Body::V(minkowski_gauge::VPolytope::new(
        expected.iter().map(|p| v(&[p[0] / 3.0, p[1] / 3.0])).collect(),
    ).unwrap());
    c.check(
        "(0,-1) lies in λC",
        lam_c.contains(&v(&[0.0, -1.0]), 1e-12).unwrap(),
        "membership".into(),
    );
    gate.report(c, t0);
}

fn criterion_simplex(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("simplex_symmetry");
    for d in 1..=4usize {
        let s = Body::V(bodies::make_simplex(d).unwrap());
        let r = gauge::alpha_inf(&s).unwrap();
        let target = (d as f64 - 1.0) / (d as f64 + 1.0);
        let cen = gauge::centroid(&s).unwrap();
        let off = r.critical_points.iter().map(|p| (p - &cen).norm()).fold(0.0, f64::max);
        c.check(
            &format!("d={d}"),
            (r.alpha_inf - target).abs() <= 1e-8 && r.critical_dim_estimate == 0 && off <= 1e-7,
            format!("α_K={} target {target}, dim {}, off-centroid {off:.1e}", r.alpha_inf, r.critical_dim_estimate),
        );
    }
    let mut rng = vector::rng(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let k = random_polygon(&mut rng);
        let g = gauge::centroid(&k).unwrap();
        worst = worst.max(gauge::alpha(&k, &g).unwrap().alpha);
    }
    c.check("α at centroid over 200 polygons", worst <= 1.0 / 3.0 + 1e-8, format!("max {worst}"));
    gate.report(c, t0);
}

fn criterion_prism(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("prism_critical_segment");
    let p = bodies::make_sobczyk_prism();
    let r = gauge::alpha_inf(&p).unwrap();
    c.check("α_K", (r.alpha_inf - 1.0 / 3.0).abs() <= 1e-8, format!("{}", r.alpha_inf));
    c.check("critical dimension", r.critical_dim_estimate == 1, format!("{}", r.critical_dim_estimate));
    let top = r.critical.support_point(&v(&[0.0, 0.0, 1.0])).unwrap();
    let bot = r.critical.support_point(&v(&[0.0, 0.0, -1.0])).unwrap();
    let et = (&top - v(&[2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0])).norm();
    let eb = (&bot - v(&[2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0])).norm();
    c.check("extreme points", et <= 1e-6 && eb <= 1e-6, format!("{:?} {:?}", top.as_slice(), bot.as_slice()));
    c.check(
        "codimension inequality sides",
        (r.klee_lhs - 2.0).abs() <= 1e-8 && r.codim == 2,
        format!("{} vs {}", r.klee_lhs, r.codim),
    );
    gate.report(c, t0);
}

fn criterion_half_disc(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("half_disc_minimizer");
    let k = Body::V(bodies::make_half_disc(256).unwrap());
    let r = gauge::alpha_inf(&k).unwrap();
    let target = 3.0 - 2.0 * 2f64.sqrt();
    c.check("α_K", (r.alpha_inf - target).abs() <= 1e-2, format!("{} vs 3-2√2 = {target}", r.alpha_inf));
    let m_expected = v(&[0.0, 2f64.sqrt() - 1.0]);
    let dm = (&r.minimizer - &m_expected).norm();
    c.check("minimizer", dm <= 1e-2, format!("{:?}, off {dm:.2e}", r.minimizer.as_slice()));
    let analytic = bodies::half_disc_centroid();
    let poly = gauge::centroid(&k).unwrap();
    let dc = (&poly - &analytic).norm();
    c.check("centroid", dc <= 1e-3, format!("polygon {:?} vs (0, 4/(3π)), off {dc:.2e}", poly.as_slice()));
    let sep = (&r.minimizer - &analytic).norm();
    c.check("minimizer separated from centroid by more than 0.05", sep > 0.05, format!("separation {sep:.4}"));
    let a_cen = gauge::alpha(&k, &analytic).unwrap().alpha;
    c.check(
        "centroid outside the critical set",
        a_cen > r.alpha_inf + 1e-6,
        format!("α(centroid) = {a_cen:.6} > α_K = {:.6}", r.alpha_inf),
    );
    gate.report(c, t0);
}

fn criterion_identities(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("equivalent_functionals");
    let mut rng = vector::rng(5);
    let (mut beta_gap, mut one_side, mut chord_res, mut conv_gap, mut bf_excess) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let k = random_polygon(&mut rng);
        let x = interior_point(&k, &mut rng);
        let a = gauge::alpha(&k, &x).unwrap().alpha;
        let ic = oracles::identity_check(&k, &x, 64, 9).unwrap();
        let b = oracles::beta(&k, &x).unwrap();
        beta_gap = beta_gap.max((a - ic.from_beta.unwrap()).abs());
        let r = &ic.ratios;
        let s = r.sigma.unwrap().value;
        // sampled infima sit above the truth, sampled suprema below
        let viol = [
            b - 1e-8 - s,
            ic.from_sigma - a,
            ic.from_nu.unwrap() - a,
            ic.from_omega.unwrap() - a,
            ic.from_gamma.unwrap() - a,
        ];
        one_side = viol.iter().fold(one_side, |m, v| m.max(*v));
        conv_gap = conv_gap.max(a - ic.from_nu.unwrap()).max(a - ic.from_omega.unwrap());
        chord_res = chord_res.max(r.residual_gamma_omega).max(r.residual_nu_sigma);
        bf_excess = bf_excess.max(ic.brute_force - a);
    }
    c.check("interior α vs (1-β)/(1+β)", beta_gap <= 1e-8, format!("max gap {beta_gap:.2e}"));
    let mut rho_gap = 0.0f64;
    for _ in 0..100 {
        let k = random_polygon(&mut rng);
        let x = exterior_point(&k, &mut rng);
        let a = gauge::alpha(&k, &x).unwrap().alpha;
        let ic = oracles::identity_check(&k, &x, 64, 9).unwrap();
        rho_gap = rho_gap.max((a - ic.from_rho.unwrap()).abs());
        one_side = one_side.max(a - 1e-8 - ic.from_mu.unwrap()).max(a - 1e-8 - ic.from_sigma);
        conv_gap = conv_gap.max(ic.from_mu.unwrap() - a);
        bf_excess = bf_excess.max(ic.brute_force - a);
    }
    c.check("exterior α vs (1+ρ)/(1-ρ)", rho_gap <= 1e-6, format!("max gap {rho_gap:.2e}"));
    c.check("one-sided sampled functionals", one_side <= 1e-8, format!("max violation {one_side:.2e}"));
    c.check("per-chord identities", chord_res <= 1e-12, format!("max residual {chord_res:.2e}"));
    c.check("sampled lower bound never exceeds α", bf_excess <= 1e-8, format!("max excess {bf_excess:.2e}"));
    c.notes.push(format!("convergence: largest remaining sampled gap {conv_gap:.2e}"));
    gate.report(c, t0);
}

fn criterion_level_sets(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("level_set_algebra");
    let mut rng = vector::rng(6);
    let mut mismatches = 0;
    let mut ambiguous = 0;
    let mut pairs = 0;
    for _ in 0..10 {
        let k = random_polygon(&mut rng);
        let g = Gauge::new(&k).unwrap();
        for _ in 0..1000 {
            let lam = rng.random_range(0.0..3.0);
            let x = box_point(&k, &mut rng, 4.0);
            let a = g.alpha(&x).unwrap().alpha;
            pairs += 1;
            if (a - lam).abs() <= 1e-8 {
                ambiguous += 1;
                continue;
            }
            let l = gauge::level_set(&k, lam).unwrap();
            if l.contains(&x, 1e-12).unwrap() != (a < lam) {
                mismatches += 1;
            }
        }
    }
    c.check(
        "membership vs α",
        mismatches == 0,
        format!("{pairs} pairs, {mismatches} mismatches, {ambiguous} within 1e-8 of the level"),
    );
    let dirs = convex::sample_directions(2, 1000, 11);
    let mut comp = 0.0f64;
    for _ in 0..3 {
        let k = random_polygon(&mut rng);
        for lam in [1.2, 2.0, 3.0] {
            let kl = gauge::level_set(&k, lam).unwrap().to_body().unwrap();
            for mu in [1.2, 2.0, 3.0] {
                let twice = gauge::level_set(&kl, mu).unwrap();
                let once = gauge::level_set(&k, lam * mu).unwrap();
                for u in &dirs {
                    comp = comp.max((twice.support(u).unwrap() - once.support(u).unwrap()).abs());
                }
            }
        }
    }
    c.check("composition of level sets", comp <= 1e-8, format!("max support gap {comp:.2e}"));
    let mut hammer_bad = 0;
    let mut hammer_missed = 0;
    let mut tested = 0;
    for _ in 0..5 {
        let k = random_polygon(&mut rng);
        let g = Gauge::new(&k).unwrap();
        for rho in [0.6, 1.0, 1.4] {
            let lam = 2.0 * rho - 1.0;
            for _ in 0..400 {
                let y = box_point(&k, &mut rng, 2.5);
                let a = g.alpha(&y).unwrap().alpha;
                if (a - lam).abs() <= 1e-8 {
                    continue;
                }
                tested += 1;
                let (inside, ex) = gauge::hammer_contains(&k, &y, rho, 256, 1e-12).unwrap();
                if inside != (a < lam) {
                    // the union over sampled boundary points is an inner
                    // approximation; only misses close to the level are excused
                    if !inside && rho > 1.0 && !ex.is_exact() && lam - a < 1e-2 {
                        hammer_missed += 1;
                    } else {
                        hammer_bad += 1;
                    }
                }
            }
        }
    }
    c.check(
        "associated bodies vs level sets",
        hammer_bad == 0,
        format!("{tested} points, {hammer_bad} mismatches, {hammer_missed} near-level misses of the sampled union"),
    );
    gate.report(c, t0);
}

fn criterion_bounds(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("bounds_suite");
    let mut rng = vector::rng(7);
    let (mut lip, mut chord_lip, mut growth, mut lim, mut delta) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let k = random_polygon(&mut rng);
        let g = Gauge::new(&k).unwrap();
        let w = convex::global_width(&k).unwrap().value;
        let far = convex::far_radius(&k).unwrap().value;
        for _ in 0..5 {
            let x = box_point(&k, &mut rng, 3.0);
            let y = box_point(&k, &mut rng, 3.0);
            let (ax, ay) = (g.alpha(&x).unwrap().alpha, g.alpha(&y).unwrap().alpha);
            let d = (&x - &y).norm();
            lip = lip.max((ax - ay).abs() - 2.0 * d / w);
            let tau = convex::max_chord(&k, &((&x - &y) / d)).unwrap().value;
            chord_lip = chord_lip.max((ax - ay).abs() - 2.0 * d / tau);
            let n = x.norm();
            let tx = convex::max_chord(&k, &(&x / n)).unwrap().value;
            growth = growth.max((ax - 2.0 * n / tx).abs() - (2.0 * far / w - 1.0));
        }
        let u = vector::random_unit(&mut rng, 2);
        let s = 1e6;
        let tau = convex::max_chord(&k, &u).unwrap().value;
        let ratio = g.alpha(&(&u * s)).unwrap().alpha / s;
        lim = lim.max((ratio - 2.0 / tau).abs() / (2.0 / tau));
        for lam in [1.0, 1.5, 3.0] {
            let sd = gauge::symmetrization_distance(&k, lam).unwrap();
            delta = delta.max(sd.distance - sd.bound);
        }
    }
    c.check("uniform Lipschitz", lip <= 1e-9, format!("max excess {lip:.2e}"));
    c.check("chord Lipschitz", chord_lip <= 1e-9, format!("max excess {chord_lip:.2e}"));
    c.check("growth bound 2D/w - 1", growth <= 1e-9, format!("max excess {growth:.2e}"));
    c.check("linear growth limit at s = 1e6", lim <= 1e-3, format!("max relative gap {lim:.2e}"));
    c.check("symmetrization distance bound for λ ≥ 1", delta <= 1e-9, format!("max excess {delta:.2e}"));
    let mut ball_gap = 0.0f64;
    for (a, r) in [(0.7, 1.0), (3.0, 0.5)] {
        let ball = Body::ball(v(&[a, 0.0]), r).unwrap();
        for lam in [0.5, 1.0, 2.0] {
            let kl = gauge::level_set(&ball, lam).unwrap().to_body().unwrap();
            let lc = convex::central_symm(&ball).scaled(lam).unwrap();
            let h = convex::hausdorff(&kl, &lc).unwrap().value;
            ball_gap = ball_gap.max((h - a).abs());
        }
    }
    c.check("ball attains δ = a", ball_gap <= 1e-9, format!("max gap {ball_gap:.2e}"));
    gate.report(c, t0);
}

fn criterion_structure(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("structure_theorems");
    let mut rng = vector::rng(8);
    let mut prod_gap = 0.0f64;
    for _ in 0..100 {
        let m = random_polygon(&mut rng);
        let n = random_polygon(&mut rng);
        let y = box_point(&m, &mut rng, 2.0);
        let z = box_point(&n, &mut rng, 2.0);
        let flat = Body::H(Body::product(vec![m.clone(), n.clone()]).unwrap().to_hpolytope().unwrap());
        let a = gauge::alpha(&flat, &vector::concat(&[y.clone(), z.clone()])).unwrap().alpha;
        let b = gauge::alpha(&m, &y).unwrap().alpha.max(gauge::alpha(&n, &z).unwrap().alpha);
        prod_gap = prod_gap.max((a - b).abs());
    }
    c.check("product rule", prod_gap <= 1e-8, format!("max gap {prod_gap:.2e}"));
    let mut sup = f64::NEG_INFINITY;
    for _ in 0..100 {
        let k = random_polygon(&mut rng);
        let m = random_polygon(&mut rng);
        let am = gauge::alpha_inf(&k).unwrap().alpha_inf.max(gauge::alpha_inf(&m).unwrap().alpha_inf);
        let s = gauge::alpha_inf(&Body::sum(vec![k, m]).unwrap()).unwrap().alpha_inf;
        sup = sup.max(s - am);
    }
    c.check("sums are no less symmetric", sup <= 1e-8, format!("max excess {sup:.2e}"));
    let mut sym = 0.0f64;
    for _ in 0..20 {
        let c0 = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        let mut pts = Vec::new();
        for _ in 0..rng.random_range(2..6) {
            let p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            pts.push(vec![c0[0] + p[0], c0[1] + p[1]]);
            pts.push(vec![c0[0] - p[0], c0[1] - p[1]]);
        }
        if let Ok(k) = Body::vpolytope(&pts) {
            sym = sym.max(gauge::alpha_inf(&k).unwrap().alpha_inf);
        }
    }
    for d in 1..=4 {
        let lo = vec![-1.0; d];
        let hi: Vec<f64> = (0..d).map(|j| 1.0 + j as f64).collect();
        let b = Body::H(bodies::make_box(&lo, &hi).unwrap());
        sym = sym.max(gauge::alpha_inf(&b).unwrap().alpha_inf);
    }
    sym = sym.max(gauge::alpha_inf(&Body::ball(v(&[1.0, 2.0, 3.0]), 2.0).unwrap()).unwrap().alpha_inf);
    c.check("symmetric bodies", sym <= 1e-9, format!("max α_K {sym:.2e}"));
    let mut asym = f64::INFINITY;
    for d in 2..=4usize {
        for _ in 0..5 {
            let pts: Vec<Vec<f64>> = (0..=d).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
            if let Ok(s) = Body::vpolytope(&pts) {
                asym = asym.min(gauge::alpha_inf(&s).unwrap().alpha_inf);
            }
        }
    }
    c.check("asymmetric simplices", asym >= 0.3, format!("min α_K {asym:.6}"));
    gate.report(c, t0);
}

fn criterion_chebyshev(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("chebyshev_suite");
    let seg = Body::H(bodies::make_box(&[-1.0], &[1.0]).unwrap());
    let g = chebyshev::cheb_growth(&seg, &v(&[2.0]), 2).unwrap().growth;
    c.check("growth on [-1,1] at 2, degree 2", g == 7.0, format!("{g}"));
    let mut rng = vector::rng(9);
    let (mut sup, mut attain) = (0.0f64, 0.0f64);
    for i in 0..40 {
        let k = random_polygon(&mut rng);
        let x = exterior_point(&k, &mut rng);
        let n = 1 + i % 8;
        let r = chebyshev::cheb_growth_seeded(&k, &x, n, i as u64).unwrap();
        sup = sup.max(r.sup_norm_check);
        attain = attain.max((r.extremal_value - r.growth).abs() - (r.tol_witness + 1e-12 * r.growth));
    }
    c.check("extremal polynomial bounded on K", sup <= 1.0 + 1e-6, format!("max sampled |P| {sup}"));
    c.check("extremal polynomial attains the growth", attain <= 0.0, format!("max excess over tolerance {attain:.2e}"));
    let mut lead_ok = true;
    for n in 1..=20usize {
        let a = chebyshev::leading_growth(&seg, &v(&[1.0]), n).unwrap();
        lead_ok &= a.value == 2f64.powi(n as i32 - 1);
    }
    c.check("leading growth on [-1,1]", lead_ok, "2^(n-1) for n ≤ 20".into());
    let mut bern = f64::NEG_INFINITY;
    let mut count = 0;
    for _ in 0..50 {
        let k = random_polygon(&mut rng);
        let w = convex::global_width(&k).unwrap().value;
        let gk = Gauge::new(&k).unwrap();
        for _ in 0..20 {
            let x = interior_point(&k, &mut rng);
            let a = gk.alpha(&x).unwrap().alpha;
            if a >= 1.0 {
                continue;
            }
            let n = rng.random_range(1..7);
            let f = LinearForm::new(&k, &vector::random_unit(&mut rng, 2)).unwrap();
            let grad = chebyshev::family_gradient(&f, &x, n).norm();
            let bound = 2.0 * n as f64 / (w * (1.0 - a).sqrt());
            bern = bern.max(grad - bound);
            count += 1;
        }
    }
    c.check("gradient theorem on the certified family", bern <= 1e-6, format!("{count} instances, max excess {bern:.2e}"));
    let cj = chebyshev::conjecture_search(&triangle(), 3, 200, 32, 1).unwrap();
    c.notes.push(format!(
        "conjectured bound (reported only): max ratio {:.6} over {} instances, counterexample {}",
        cj.max_ratio, cj.instances, cj.counterexample_found
    ));
    gate.report(c, t0);
}

fn criterion_hausdorff(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut c = Crit::new("hausdorff_routes");
    let mut rng = vector::rng(10);
    let (mut gap, mut over, mut nonmono) = (0.0f64, f64::NEG_INFINITY, 0);
    for _ in 0..100 {
        let k = random_polygon(&mut rng);
        let m = random_polygon(&mut rng);
        let (pk, pm) = (k.polygon().unwrap(), m.polygon().unwrap());
        let exact = convex::hausdorff_by_definition(&pk, &pm);
        gap = gap.max((exact - convex::hausdorff_by_fan(&pk, &pm)).abs());
        let mut prev = 0.0;
        for count in [8, 16, 32, 64, 128, 256] {
            let s = convex::hausdorff_sampled(&k, &m, &vector::circle_directions(count, 0.0)).unwrap();
            over = over.max(s - exact);
            if s < prev {
                nonmono += 1;
            }
            prev = s;
        }
    }
    c.check("definition vs support formula", gap <= 1e-9, format!("max gap {gap:.2e}"));
    c.check("sampled formula is a lower bound", over <= 1e-12, format!("max excess {over:.2e}"));
    c.check("monotone under doubling", nonmono == 0, format!("{nonmono} decreases"));
    gate.report(c, t0);
}

fn trend_note() {
    println!("NOTE weighted_l2_truncations (trend only)");
    for mode in [WeightMode::Increasing, WeightMode::Decreasing] {
        for d in [4, 16, 64] {
            let k = Body::Oracle(bodies::make_weighted_l2_ball(d, mode).unwrap());
            let diam = convex::diameter(&k).unwrap();
            let w = convex::global_width(&k).unwrap();
            println!(
                "    mode {mode:?} d={d}: diameter {:.6} ({:?}), width {:.6} ({:?}); limits 2 and √2 = {:.6}",
                diam.value,
                diam.exactness,
                w.value,
                w.exactness,
                2f64.sqrt()
            );
        }
    }
}

fn main() {
    let start = Instant::now();
    let mut gate = Gate { failed: Vec::new() };
    criterion_triangle(&mut gate);
    criterion_simplex(&mut gate);
    criterion_prism(&mut gate);
    criterion_half_disc(&mut gate);
    criterion_identities(&mut gate);
    criterion_level_sets(&mut gate);
    criterion_bounds(&mut gate);
    criterion_structure(&mut gate);
    criterion_chebyshev(&mut gate);
    criterion_hausdorff(&mut gate);
    trend_note();
    println!(
        "acceptance: {} of 10 criteria passed in {:.1}s{}",
        10 - gate.failed.len(),
        start.elapsed().as_secs_f64(),
        if gate.failed.is_empty() { String::new() } else { format!("; failing: {}", gate.failed.join(", ")) }
    );
    if !gate.failed.is_empty() && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
