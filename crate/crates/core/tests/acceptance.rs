//! One pass/fail line per acceptance criterion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use paratensor::manifest::{load_manifest, Loaded};
use paratensor::paracontact::{detect_epsilon, is_para_sasakian, sasakian_identity_suite, validate_axioms, validate_metric_compat};
use paratensor::pipeline::{run, Command, RunOptions, VerificationReport};
use paratensor::soliton_lab::{
    detect_torse_forming, einstein_like_fit, einstein_like_suite, parallel_tensor_check, solve_soliton_constants,
    torse_forming_constants, xi_consequence_suite, EinsteinFit, ParallelCandidate, SolitonSolution, TorseClass,
};
use paratensor::{Geometry, Rational, RicciMode, Status, TensorField};

const SEED: u64 = 42;
const FIXTURES: [&str; 6] = [
    "ex1_r3_spacelike",
    "ex2_r3_timelike",
    "ex5d_r5_g1",
    "ex5d_r5_g2",
    "flat_r3",
    "warped_r3",
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> Loaded {
    load_manifest(&fixtures().join(format!("{name}.json"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn geometry(loaded: &Loaded) -> Geometry {
    Geometry::new(loaded.structure.clone(), loaded.frame.clone(), SEED).expect("geometry")
}

fn report(name: &str, command: Command, mode: Option<RicciMode>) -> VerificationReport {
    let opts = RunOptions {
        ricci_mode: mode,
        ..RunOptions::default()
    };
    run(command, &load(name), &opts).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn entry_passes(r: &VerificationReport, id: &str) -> Result<(), String> {
    let e = r.get(id).ok_or_else(|| format!("{}: no entry {id}", r.name))?;
    ensure(
        e.status == Status::Pass && e.symbolic_zero,
        format!("{}: {id} is {} ({})", r.name, e.status, e.details),
    )
}

fn details<'a>(r: &'a VerificationReport, id: &str) -> &'a str {
    r.get(id).map(|e| e.details.as_str()).unwrap_or("")
}

fn structure_and_signature() -> Outcome {
    for (name, eps) in [("ex5d_r5_g1", -1), ("ex5d_r5_g2", 1)] {
        let loaded = load(name);
        let geom = geometry(&loaded);
        let s = &geom.structure;
        let axioms = validate_axioms(s.phi(), s.xi(), s.eta(), &geom.probe);
        let compat = validate_metric_compat(s, &geom.probe);
        let all_zero = axioms.entries().iter().chain(compat.entries()).all(|e| e.symbolic_zero && e.passed());
        ensure(all_zero, format!("{name}: axiom or compatibility check failed"))?;
        let detected = detect_epsilon(s.metric(), s.xi(), s.chart()).map_err(|e| e.to_string())?;
        ensure(detected == eps, format!("{name}: epsilon {detected}, expected {eps}"))?;
    }
    let g1 = geometry(&load("ex5d_r5_g1"));
    let m1 = g1.structure.metric();
    ensure(m1.det().as_constant() == Some(q(-1, 1)), "det g1 is not identically -1")?;
    for p in g1.structure.chart().domain_samples(SEED, 10) {
        let idx = m1.signature_at(&p).map_err(|e| e.to_string())?.index();
        ensure(idx == 1, format!("index(g1) = {idx} at {p:?}"))?;
    }
    let g2 = geometry(&load("ex5d_r5_g2"));
    let chart = g2.structure.chart();
    let m2 = g2.structure.metric();
    let at_origin = m2.signature_at(&[0.0; 5]).map_err(|e| e.to_string())?.index();
    let at_t2 = m2.signature_at(&[0.0, 0.0, 0.0, 2.0, 0.0]).map_err(|e| e.to_string())?.index();
    ensure(at_origin == 2 && at_t2 == 3, format!("index(g2) = {at_origin} at origin, {at_t2} at t=2"))?;
    let expected = chart.parse("1 + y^2 - t^2").unwrap();
    ensure((m2.det() - &expected).is_zero(), format!("det g2 = {}", chart.show(m2.det())))?;
    let r = report("ex5d_r5_g2", Command::Validate, None);
    ensure(
        details(&r, "metric.signature").contains("degenerate where y^2 - t^2 + 1 = 0"),
        "degeneracy locus not reported",
    )?;
    Ok("g1: eps=-1, index 1, det -1; g2: eps=+1, index 2 at origin and 3 at t=2, locus 1+y^2-t^2".into())
}

fn frame_tables(name: &str, connection: [&str; 9], riemann: [&str; 6]) -> Result<VerificationReport, String> {
    let r = report(name, Command::Curvature, None);
    let pairs = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j)));
    let expected: Vec<String> = pairs
        .zip(connection)
        .map(|((i, j), v)| format!("nabla(E{i},E{j}) = {v}"))
        .collect();
    ensure(
        details(&r, "frame.connection") == expected.join("; "),
        format!("{name}: connection table {}", details(&r, "frame.connection")),
    )?;
    let order = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];
    let expected: Vec<String> = order
        .iter()
        .zip(riemann)
        .map(|((i, j), v)| format!("R(E{i},E{j})E{j} = {v}"))
        .collect();
    ensure(
        details(&r, "frame.riemann") == expected.join("; "),
        format!("{name}: Riemann table {}", details(&r, "frame.riemann")),
    )?;
    Ok(r)
}

fn example_one_tables() -> Outcome {
    let r = frame_tables(
        "ex1_r3_spacelike",
        ["-E3", "0", "E1", "0", "E3", "-E2", "0", "0", "0"],
        ["E1", "-E1", "E2", "-E2", "-E3", "-E3"],
    )?;
    let diag = details(&r, "frame.ricci.weighted_trace");
    ensure(diag.starts_with("diag(0, 0, -2);"), format!("Ricci {diag}"))?;
    Ok("9 connection values, 6 curvature values, Ricci diag(0, 0, -2)".into())
}

fn example_two_tables() -> Outcome {
    let r = frame_tables(
        "ex2_r3_timelike",
        ["-E3", "0", "-E1", "0", "E3", "E2", "0", "0", "0"],
        ["-E1", "-E1", "-E2", "-E2", "E3", "E3"],
    )?;
    let pf = details(&r, "frame.ricci.paper_frame_sum");
    let wt = details(&r, "frame.ricci.weighted_trace");
    ensure(pf.starts_with("diag(-2, -2, -2);"), format!("paper_frame_sum {pf}"))?;
    ensure(wt.starts_with("diag(0, 0, -2);"), format!("weighted_trace {wt}"))?;
    let golden_path = fixtures().join("golden/ex2_r3_timelike.json");
    let golden = std::fs::read_to_string(&golden_path).map_err(|e| e.to_string())?;
    let fresh = report("ex2_r3_timelike", Command::All, None).to_json();
    ensure(golden == fresh, "golden report differs from a fresh run")?;
    let parsed: VerificationReport = serde_json::from_str(&golden).map_err(|e| e.to_string())?;
    ensure(
        details(&parsed, "frame.ricci.paper_frame_sum") == pf && details(&parsed, "frame.ricci.weighted_trace") == wt,
        "golden Ricci entries differ",
    )?;
    Ok("tables reproduced; paper_frame_sum diag(-2, -2, -2), weighted_trace diag(0, 0, -2), golden bit-exact".into())
}

fn para_sasakian_identities() -> Outcome {
    for name in ["ex1_r3_spacelike", "ex2_r3_timelike"] {
        let geom = geometry(&load(name));
        let s = &geom.structure;
        let ps = is_para_sasakian(s, &geom.connection, &geom.probe).map_err(|e| e.to_string())?;
        ensure(ps.passed(), format!("{name}: not para-Sasakian"))?;
        let suite = sasakian_identity_suite(s, &geom.weighted, &geom.probe).map_err(|e| e.to_string())?;
        for e in suite.entries() {
            ensure(e.symbolic_zero, format!("{name}: {} residual {}", e.id, e.details))?;
        }
        ensure(suite.get("sasakian.ricci_xi").is_some(), "S(X,xi) entry missing")?;
    }
    Ok("both examples para-Sasakian; four identities including S(X,xi) = -2 eta(X) vanish".into())
}

fn soliton_constants() -> Outcome {
    let cases = [
        ("ex1_r3_spacelike", RicciMode::WeightedTrace, q(0, 1), q(2, 1), [1, -1, 0]),
        ("ex2_r3_timelike", RicciMode::PaperFrameSum, q(2, 1), q(4, 1), [-1, 1, 0]),
    ];
    for (name, mode, lambda, mu, diag) in cases {
        let geom = geometry(&load(name));
        let sol = solve_soliton_constants(&geom, mode, geom.structure.xi()).map_err(|e| e.to_string())?;
        ensure(
            sol.lambda() == &lambda && sol.mu() == &mu,
            format!("{name}: ({}, {})", sol.lambda(), sol.mu()),
        )?;
        let SolitonSolution::LeastSquares { residual_norm, .. } = &sol else {
            return Err(format!("{name}: residual unexpectedly zero"));
        };
        let want: Vec<Rational> = diag.iter().map(|&d| q(d, 1)).collect();
        ensure(sol.residual_diagonal() == want, format!("{name}: residual diag {:?}", sol.residual_diagonal()))?;
        ensure(
            (residual_norm - 2f64.sqrt()).abs() <= 1e-12,
            format!("{name}: residual norm {residual_norm}"),
        )?;
    }
    Ok("(0, 2) and (2, 4) exact rationals; residuals (1, -1, 0) and (-1, 1, 0), norm sqrt(2)".into())
}

fn einstein_constants() -> Outcome {
    let cases = [
        ("ex1_r3_spacelike", RicciMode::WeightedTrace, [0, 0, -2]),
        ("ex2_r3_timelike", RicciMode::PaperFrameSum, [-2, 0, -4]),
    ];
    for (name, mode, abc) in cases {
        let geom = geometry(&load(name));
        let fit = einstein_like_fit(&geom, mode).map_err(|e| e.to_string())?;
        let EinsteinFit::Fitted(k) = fit else {
            return Err(format!("{name}: not Einstein-like"));
        };
        ensure(
            [&k.a, &k.b, &k.c] == [&q(abc[0], 1), &q(abc[1], 1), &q(abc[2], 1)],
            format!("{name}: ({}, {}, {})", k.a, k.b, k.c),
        )?;
        let suite = einstein_like_suite(&geom, mode, &k, true).map_err(|e| e.to_string())?;
        for id in ["einstein.para_sasakian_constants", "einstein.scalar_curvature"] {
            let e = suite.get(id).ok_or(format!("{id} missing"))?;
            ensure(e.passed() && e.symbolic_zero, format!("{name}: {id}: {}", e.details))?;
        }
    }
    Ok("(0, 0, -2) and (-2, 0, -4); eps*a + c = 1 - n and scalar curvature formula exact".into())
}

fn torse_constants() -> Outcome {
    for eps in [1i8, -1] {
        let tc = torse_forming_constants(&q(0, 1), &q(eps as i64, 2), eps, 3);
        ensure(
            tc.c == q(-1, 2) && tc.mu == q(0, 1) && tc.check == q(0, 1),
            format!("eps={eps}: c={}, mu={}, check={}", tc.c, tc.mu, tc.check),
        )?;
    }
    Ok("c = -1/2, mu = 0, check 0 for eps = +1 and -1".into())
}

fn torse_detection() -> Outcome {
    let warped = geometry(&load("warped_r3"));
    let tf = detect_torse_forming(&warped).map_err(|e| e.to_string())?;
    let minus_eta = warped.structure.eta().scale_rational(&q(-1, 1));
    ensure(
        tf.f.as_constant() == Some(q(1, 1))
            && tf.w.try_sub(&minus_eta).map_err(|e| e.to_string())?.is_zero()
            && tf.regular
            && tf.classification == TorseClass::General,
        "warped: expected f = 1, w = -eta, regular",
    )?;
    let flat = detect_torse_forming(&geometry(&load("flat_r3"))).map_err(|e| e.to_string())?;
    ensure(
        flat.f.is_zero() && flat.classification == TorseClass::RecurrentCaseII && !flat.regular,
        format!("flat: {}", flat.classification),
    )?;
    let ex1 = detect_torse_forming(&geometry(&load("ex1_r3_spacelike"))).map_err(|e| e.to_string())?;
    ensure(ex1.classification == TorseClass::NotTorseForming, format!("ex1: {}", ex1.classification))?;
    Ok("warped f=1, w=-eta, regular; flat recurrent_case_II; spacelike R^3 structure not torse-forming".into())
}

fn property_suites() -> Outcome {
    let ids = [
        "connection.torsion_free",
        "connection.metric_compatible",
        "curvature.antisymmetry",
        "curvature.metric_antisymmetry",
        "curvature.first_bianchi",
        "ricci.symmetric",
        "lie.dual_formula",
    ];
    for name in FIXTURES {
        let r = report(name, Command::Curvature, None);
        for id in ids {
            entry_passes(&r, id)?;
        }
    }
    Ok(format!("{} properties on {} fixtures", ids.len(), FIXTURES.len()))
}

fn oracle_agreement() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in FIXTURES {
        let r = report(name, Command::Oracle, None);
        ensure(r.get("oracle.samples").is_none(), format!("{name}: {}", details(&r, "oracle.samples")))?;
        for id in ["oracle.christoffel", "oracle.riemann", "oracle.ricci"] {
            entry_passes(&r, id)?;
            worst = worst.max(r.get(id).and_then(|e| e.numeric_max).unwrap_or(0.0));
        }
    }
    let r = report("ex1_r3_spacelike", Command::Oracle, None);
    let halving = r.get("oracle.halving").ok_or("halving entry missing")?;
    ensure(halving.status == Status::Pass, format!("halving: {}", halving.details))?;
    Ok(format!(
        "worst relative deviation {worst:.1e} over 10 points per fixture; spacelike R^3 halving ratio {}",
        halving.numeric_max.unwrap_or(f64::NAN)
    ))
}

fn parallel_tensors() -> Outcome {
    let loaded = load("ex1_r3_spacelike");
    let geom = geometry(&loaded);
    let s = &geom.structure;
    let mode = RicciMode::WeightedTrace;
    let tf = detect_torse_forming(&geom).map_err(|e| e.to_string())?;
    let fit = einstein_like_fit(&geom, mode).map_err(|e| e.to_string())?;
    let fit = fit.constants().cloned();

    let three_g = ParallelCandidate::new(s.metric().tensor().scale_rational(&q(3, 1))).map_err(|e| e.to_string())?;
    let r = parallel_tensor_check(&geom, &three_g, &tf, true, fit.as_ref()).map_err(|e| e.to_string())?;
    for id in ["parallel.nabla_alpha", "parallel.proportionality"] {
        let e = r.get(id).ok_or(format!("{id} missing"))?;
        ensure(e.passed() && e.symbolic_zero, format!("3g: {id}: {}", e.details))?;
    }

    let g_eta: TensorField = s.metric().tensor().try_add(&s.eta_eta()).map_err(|e| e.to_string())?;
    let candidate = ParallelCandidate::new(g_eta).map_err(|e| e.to_string())?;
    let r = parallel_tensor_check(&geom, &candidate, &tf, true, fit.as_ref()).map_err(|e| e.to_string())?;
    ensure(
        !r.get("parallel.nabla_alpha").map(|e| e.symbolic_zero).unwrap_or(true),
        "g + eta(x)eta reported parallel",
    )?;

    for (name, mu) in [("ex1_r3_spacelike", q(2, 1)), ("warped_r3", q(1, 1))] {
        let geom = geometry(&load(name));
        let fit = einstein_like_fit(&geom, mode).map_err(|e| e.to_string())?;
        let tf = detect_torse_forming(&geom).map_err(|e| e.to_string())?;
        let ps = is_para_sasakian(&geom.structure, &geom.connection, &geom.probe)
            .map(|r| r.passed())
            .unwrap_or(false);
        let candidate = ParallelCandidate::soliton_form(&geom, mode, &mu).map_err(|e| e.to_string())?;
        let r = parallel_tensor_check(&geom, &candidate, &tf, ps, fit.constants()).map_err(|e| e.to_string())?;
        let e = r.get("parallel.soliton_lambda").ok_or("soliton_lambda missing")?;
        ensure(e.passed() && e.symbolic_zero, format!("{name}: {}", e.details))?;
    }
    Ok("3g parallel and proportional; g + eta(x)eta not parallel; lambda = -(a + eps(c + mu)) on the spacelike R^3 and warped fixtures".into())
}

fn xi_consequences() -> Outcome {
    let geom = geometry(&load("ex1_r3_spacelike"));
    let mode = RicciMode::WeightedTrace;
    let fit = einstein_like_fit(&geom, mode).map_err(|e| e.to_string())?;
    let suite = xi_consequence_suite(&geom, mode, &q(0, 1), &q(2, 1), fit.constants(), true).map_err(|e| e.to_string())?;
    for id in ["xi.constants", "xi.geodesic", "xi.parallel_ricci", "xi.parallel_ricci_operator"] {
        let e = suite.get(id).ok_or(format!("{id} missing"))?;
        ensure(e.passed() && e.symbolic_zero, format!("{id}: {}", e.details))?;
    }
    Ok("eps(a+lambda)+c+mu = 0, nabla_xi xi = 0, nabla_xi S = 0, nabla_xi Q = 0".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [Criterion; 12] = [
        ("structure axioms, epsilon and signature on R^5", structure_and_signature),
        ("spacelike R^3 frame tables", example_one_tables),
        ("timelike R^3 frame tables and Ricci modes", example_two_tables),
        ("para-Sasakian identities on the R^3 examples", para_sasakian_identities),
        ("soliton constants with V = xi", soliton_constants),
        ("Einstein-like fits and constant relations", einstein_constants),
        ("torse-forming soliton constants", torse_constants),
        ("torse-forming detection", torse_detection),
        ("symbolic property suites", property_suites),
        ("finite-difference oracle agreement", oracle_agreement),
        ("parallel symmetric tensors", parallel_tensors),
        ("consequences along xi on the spacelike R^3 structure", xi_consequences),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(summary) => println!("criterion {:>2}: PASS  {title}: {summary}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {title}: {reason}", k + 1);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance: {} of {} criteria passed in {elapsed:.1}s", criteria.len() - failed, criteria.len());
    if failed == 0 && elapsed < 60.0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
