//! Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use colexcode::code::{check_weight_congruence, compute_distance, verify_transversal_cnot, CodeReport, PUBLISHED_DISTANCE_CLAIM};
use colexcode::colex::{load_colex, save_colex, validate, Mode};
use colexcode::decoder::{build_lookup, decode_injected, log_log_slope, monte_carlo};
use colexcode::gf2::{BitVector, DEFAULT_ENUMERATION_CAP};
use colexcode::nets::{elementary_excitations, nets_report};
use colexcode::statevec::{apply_pauli, check_ground_conditions, encode_zero, energy_expectation, verify_transversal_t};
use colexcode::{build_tesseract, build_torus, Colex, Color, CssCode, Error, PauliKind, PauliOp};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn tetra_colex() -> Colex {
    build_tesseract().puncture(0).expect("tesseract is closed")
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn c1_tesseract() -> Outcome {
    let start = Instant::now();
    let t = build_tesseract();
    let v = validate(&t, Mode::Closed);
    let elapsed = start.elapsed();
    ensure(v.passed, format!("violations {:?}", v.violations))?;
    let c = t.counts();
    ensure((c.sites, c.links, c.faces, c.cells) == (16, 32, 24, 8), format!("counts {c:?}"))?;
    ensure(t.faces().iter().all(|f| f.sites.len() == 4), "face sizes")?;
    ensure(t.cells().iter().all(|c| c.sites.len() == 8), "cell sizes")?;
    within(elapsed, Duration::from_millis(100), "build + validate")?;
    Ok(format!("16/32/24/8, faces 4, cells 8, {elapsed:?}"))
}

fn c2_puncture() -> Outcome {
    let mut checked = 0;
    for parent in [build_tesseract(), build_torus(2).map_err(e)?] {
        let before = parent.counts();
        for s in 0..parent.n_sites() {
            let (p, r) = parent.puncture_with_report(s).map_err(e)?;
            let after = p.counts();
            let removed = (before.sites - after.sites, before.links - after.links, before.faces - after.faces, before.cells - after.cells);
            ensure(removed == (1, 4, 6, 4), format!("site {s}: removed {removed:?}"))?;
            ensure((r.removed_sites, r.removed_links, r.removed_faces, r.removed_cells) == (1, 4, 6, 4), "report counts")?;
            ensure(p.n_sites() % 2 == 1, "parity")?;
            if parent.n_sites() == 16 {
                let code = CssCode::from_colex(&p).map_err(e)?;
                let xh = PauliOp::transversal(PauliKind::X, p.n_sites());
                let zh = PauliOp::transversal(PauliKind::Z, p.n_sites());
                ensure(!xh.commutes(&zh).map_err(e)?, "X^ and Z^ commute")?;
                ensure(code.in_normalizer(&xh).map_err(e)? && code.in_normalizer(&zh).map_err(e)?, "transversal logicals")?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} sites removed (tesseract and torus L=2), each 1/4/6/4, odd parity"))
}

fn c3_parameters() -> Outcome {
    let tetra = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let tess = CssCode::from_colex(&build_tesseract()).map_err(e)?;
    let torus_colex = build_torus(2).map_err(e)?;
    let torus = CssCode::from_colex(&torus_colex).map_err(e)?;
    ensure((tetra.n(), tetra.k()) == (15, 1), format!("tetra n={} k={}", tetra.n(), tetra.k()))?;
    ensure(tess.k() == 0, format!("tesseract k={}", tess.k()))?;
    let h1 = torus_colex.first_betti_number().unwrap_or(0) as usize;
    ensure(torus.k() == 9 && torus.k() == 3 * h1, format!("torus k={} h1={h1}", torus.k()))?;
    Ok(format!("tetra [[15,1]], tesseract k=0, torus k=9=3*{h1}"))
}

fn c4_distance() -> Outcome {
    let code = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let start = Instant::now();
    let d = compute_distance(&code, DEFAULT_ENUMERATION_CAP).map_err(e)?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "distance")?;
    let report = CodeReport::new(&code, Some(&d), Some(PUBLISHED_DISTANCE_CLAIM));
    let flag = report.agrees.ok_or("no agreement flag")?;
    ensure(flag == if d.d == PUBLISHED_DISTANCE_CLAIM { "AGREES" } else { "DISAGREES" }, "flag")?;
    build_lookup(&code, d.d).map_err(|err| format!("table at computed d collides: {err}"))?;
    let overstated = build_lookup(&code, PUBLISHED_DISTANCE_CLAIM);
    let cross = match overstated {
        Err(Error::Collision { weight, .. }) => format!("table for d={PUBLISHED_DISTANCE_CLAIM} collides at weight {weight}"),
        Ok(_) if d.d >= PUBLISHED_DISTANCE_CLAIM => "table for claimed d builds".into(),
        other => return Err(format!("cross-check inconsistent with exhaustive d: {other:?}")),
    };
    Ok(format!("dX={} dZ={} d={} ({flag} with claimed {PUBLISHED_DISTANCE_CLAIM}); {cross}; {elapsed:?}", d.dx, d.dz, d.d))
}

fn c5_congruence() -> Outcome {
    let code = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let r = check_weight_congruence(&code, DEFAULT_ENUMERATION_CAP).map_err(e)?;
    ensure(r.elements_checked == 16, format!("{} elements", r.elements_checked))?;
    ensure(r.all_weights_mod8_zero, format!("weights {:?}", r.weight_histogram))?;
    ensure(r.lemma_shared_sites_ok, format!("shared {:?}", r.shared_site_values))?;
    Ok(format!("16 elements, weights {:?}; {} pairs with s in {:?}", r.weight_histogram, r.pairs_checked, r.shared_site_values))
}

fn c6_phase_gate() -> Outcome {
    let code = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let start = Instant::now();
    let r = verify_transversal_t(&code).map_err(e)?;
    let elapsed = start.elapsed();
    ensure(r.zero_fixed_deviation < 1e-10, format!("|0> deviation {}", r.zero_fixed_deviation))?;
    ensure(r.l == 7 && r.single_application_phase_eighths == Some(7), format!("phase {:?}", r.single_application_phase_eighths))?;
    ensure(r.one_phase_deviation < 1e-10, format!("|1> deviation {}", r.one_phase_deviation))?;
    ensure(r.repetitions == 7, "repetitions")?;
    ensure(r.logical_infidelity.iter().all(|f| f.abs() < 1e-10), format!("infidelity {:?}", r.logical_infidelity))?;
    ensure(r.logical_deviation.iter().all(|d| *d < 1e-10), format!("deviation {:?}", r.logical_deviation))?;
    ensure(r.passed, "report failed")?;
    within(elapsed, Duration::from_secs(1), "phase gate check")?;
    Ok(format!(
        "|1> gains e^(i7pi/4); 7 repetitions give logical K^1/2, infidelity {:.1e}; {elapsed:?}",
        r.logical_infidelity.iter().cloned().fold(0.0, f64::max)
    ))
}

fn c7_cnot() -> Outcome {
    let code = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let r = verify_transversal_cnot(&code).map_err(e)?;
    ensure(r.stabilizer_images_in_group == r.stabilizer_images_checked, "stabilizer images")?;
    ensure(r.logical_maps.iter().all(|m| m.ok), format!("{:?}", r.logical_maps))?;
    ensure(r.passed, "report failed")?;
    let maps: Vec<&str> = r.logical_maps.iter().map(|m| m.name).collect();
    Ok(format!("{}/{} images in group; {}", r.stabilizer_images_in_group, r.stabilizer_images_checked, maps.join(" ")))
}

fn c8_excitations() -> Outcome {
    let colex = build_torus(2).map_err(e)?;
    let code = CssCode::from_colex(&colex).map_err(e)?;
    let r = elementary_excitations(&code, &colex).map_err(e)?;
    ensure(r.z_ok, "Z excitations")?;
    ensure(r.x_ok, "X excitations")?;
    ensure(r.flux_loops_ok, "flux loops")?;
    ensure(r.passed && r.sites_checked == 96, format!("{:?}", r.failures))?;
    Ok("96 sites: Z gives 4 cells of 4 colors, X gives 6 faces of 6 pairs in 4 closed loops".into())
}

fn c9_ground_state() -> Outcome {
    let code = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let zero = encode_zero(&code).map_err(e)?;
    ensure(check_ground_conditions(&zero, &code).map_err(e)?, "ground conditions")?;
    let ground = -((code.n_cells() + code.n_faces()) as f64);
    let energy = energy_expectation(&zero, &code).map_err(e)?;
    ensure((energy - ground).abs() < 1e-10, format!("energy {energy}"))?;
    for site in 0..code.n() {
        let excited = apply_pauli(&zero, &PauliOp::single(PauliKind::Z, site, code.n()).map_err(e)?).map_err(e)?;
        let de = energy_expectation(&excited, &code).map_err(e)? - energy;
        let defects = code.syndrome(&PauliOp::single(PauliKind::Z, site, code.n()).map_err(e)?).map_err(e)?.len();
        // Sites next to the puncture touch fewer than four complete cells.
        ensure((de - 2.0 * defects as f64).abs() < 1e-10, format!("site {site}: dE {de} vs {defects} defects"))?;
    }
    let interior = (0..code.n()).find(|&s| {
        let colex = code.source().unwrap();
        Color::ALL.iter().all(|&q| colex.cell_of(s, q).is_some())
    });
    let s = interior.ok_or("no interior site")?;
    let excited = apply_pauli(&zero, &PauliOp::single(PauliKind::Z, s, code.n()).map_err(e)?).map_err(e)?;
    let de = energy_expectation(&excited, &code).map_err(e)? - energy;
    ensure((de - 8.0).abs() < 1e-10, format!("interior dE {de}"))?;
    let torus = CssCode::from_colex(&build_torus(2).map_err(e)?).map_err(e)?;
    for site in 0..torus.n() {
        let syn = torus.syndrome(&PauliOp::single(PauliKind::Z, site, torus.n()).map_err(e)?).map_err(e)?;
        ensure(torus.energy(&syn) - torus.ground_energy() == 8, format!("torus site {site}"))?;
    }
    Ok(format!("all generators +1, E = {energy}; single Z at a full site raises E by {de} (all 96 torus sites by 8)"))
}

fn c10_nets() -> Outcome {
    let code = CssCode::from_colex(&build_torus(2).map_err(e)?).map_err(e)?;
    let r = nets_report(&code).map_err(e)?;
    let needed = ["closed-strings", "closed-membranes", "crossing-parity", "disjoint-color-commutation", "color-combination"];
    for name in needed {
        let c = r.check_named(name).ok_or(format!("missing {name}"))?;
        ensure(c.passed, format!("{name}: {}", c.detail))?;
    }
    ensure(r.passed, "nets report failed")?;
    Ok(needed.iter().map(|n| format!("{n} [{}]", r.check_named(n).unwrap().detail)).collect::<Vec<_>>().join("; "))
}

fn c11_decoder() -> Outcome {
    let code = CssCode::from_colex(&tetra_colex()).map_err(e)?;
    let d = compute_distance(&code, DEFAULT_ENUMERATION_CAP).map_err(e)?.d;
    let dec = build_lookup(&code, d).map_err(e)?;
    let t = dec.t();
    let mut exhaustive = 0;
    for w in 0..=t {
        for mask in 0u32..1 << code.n() {
            if mask.count_ones() as usize != w {
                continue;
            }
            let flips = BitVector::from_u64(code.n(), mask as u64);
            for basis in [PauliKind::Z, PauliKind::X] {
                for logical in [false, true] {
                    ensure(decode_injected(&code, &dec, logical, basis, &flips).map_err(e)? == logical, format!("pattern {mask:b}"))?;
                    exhaustive += 1;
                }
            }
        }
    }
    let start = Instant::now();
    let reports = monte_carlo(&code, &dec, &[0.005, 0.02], 1_000_000, 42).map_err(e)?;
    let elapsed = start.elapsed();
    let (lo, hi) = (&reports[0], &reports[1]);
    ensure(lo.rate < hi.rate, format!("rates {} vs {}", lo.rate, hi.rate))?;
    let slope = log_log_slope(lo, hi).ok_or("zero failure rate")?;
    let target = t as f64 + 0.5;
    within(elapsed, Duration::from_secs(60), "Monte Carlo")?;
    ensure(slope >= target, format!("slope {slope:.3} < {target}"))?;
    Ok(format!(
        "t={t}: {exhaustive} injected cases decoded; rates {:.2e} @0.005, {:.2e} @0.02, slope {slope:.3} >= {target}; {elapsed:?}",
        lo.rate, hi.rate
    ))
}

fn strip_elapsed(text: &[u8]) -> Result<Value, String> {
    let mut v: Value = serde_json::from_slice(text).map_err(|err| err.to_string())?;
    v.as_object_mut().ok_or("report is not an object")?.remove("elapsed_ms");
    Ok(v)
}

fn c12_round_trip(dir: &Path) -> Outcome {
    for (name, c) in [("tesseract", build_tesseract()), ("tetra", tetra_colex()), ("torus", build_torus(2).map_err(e)?)] {
        let path = dir.join(format!("{name}.json"));
        save_colex(&c, &path).map_err(e)?;
        let back = load_colex(&path).map_err(e)?;
        ensure(back == c && back.faces() == c.faces() && back.cells() == c.cells(), format!("{name} differs after reload"))?;
    }
    let bin = env!("CARGO_BIN_EXE_colexcode");
    let tetra = dir.join("tetra.json");
    let run = |args: &[&str]| Command::new(bin).args(args).output().map_err(|err| err.to_string());
    let verify = ["verify", tetra.to_str().unwrap(), "--suite", "all", "--paper-claims"];
    let (a, b) = (run(&verify)?, run(&verify)?);
    ensure(a.status.success() && b.status.success(), "verify failed")?;
    ensure(strip_elapsed(&a.stdout)? == strip_elapsed(&b.stdout)?, "verify reports differ beyond timing")?;
    let sim = ["decode-sim", tetra.to_str().unwrap(), "--p", "0.005,0.01,0.02", "--trials", "20000", "--seed", "42"];
    let (a, b) = (run(&sim)?, run(&sim)?);
    ensure(a.status.success() && a.stdout == b.stdout, "decode-sim output differs")?;
    Ok("3 builder colexes reload identically; verify and decode-sim reruns identical".into())
}

fn main() -> ExitCode {
    // Criterion 11 is timed single-threaded.
    std::env::set_var("COLEXCODE_THREADS", "1");
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        ("tesseract colex", Box::new(c1_tesseract)),
        ("puncture bookkeeping", Box::new(c2_puncture)),
        ("code parameters", Box::new(c3_parameters)),
        ("distance", Box::new(c4_distance)),
        ("weight congruence", Box::new(c5_congruence)),
        ("transversal phase gate", Box::new(c6_phase_gate)),
        ("transversal CNOT", Box::new(c7_cnot)),
        ("elementary excitations", Box::new(c8_excitations)),
        ("ground-state conditions", Box::new(c9_ground_state)),
        ("string/membrane algebra", Box::new(c10_nets)),
        ("decoder", Box::new(c11_decoder)),
        ("round trip", Box::new(move || c12_round_trip(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
