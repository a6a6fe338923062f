//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails or exceeds its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use conductor_core::catalog::{imperfect_residue, ramified_family};
use conductor_core::galois::{
    additivity_from_formula, artin_conductor, isogeny_invariance_check, ramification_filtration_from_extension,
    GLattice,
};
use conductor_core::homology::{cokernel_length, Length};
use conductor_core::rings::algebra::discriminant_of_algebra;
use conductor_core::rings::{BaseDvr, CoefficientField};
use conductor_core::torus::{
    additivity_defect, conductor_from_resolution, conductor_induced_discriminant, conductor_induced_liecoker, Witness,
};
use conductor_testkit::{brute, random, rng};
use num_rational::Rational64;
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quadratic_conductors() -> Outcome {
    let d = imperfect_residue(32).map_err(|e| e.to_string())?;
    let mut values = Vec::new();
    for (i, ext) in d.k_i.iter().enumerate() {
        let c = conductor_induced_discriminant(ext).map_err(|e| e.to_string())?.value;
        ensure(c == int(i as i64 + 1), || format!("c(T_{}) = {c}", i + 1))?;
        values.push(c.to_string());
    }
    Ok(format!("c(T_1..T_4) = {}", values.join(", ")))
}

fn compositum() -> Outcome {
    let d = imperfect_residue(32).map_err(|e| e.to_string())?;
    let lie = conductor_induced_liecoker(&d.l, &d.l).map_err(|e| e.to_string())?;
    let Witness::LieCoker {
        cokernel_length,
        composition_lengths,
        ..
    } = &lie.witness
    else {
        return Err("lie-coker report without its witness".into());
    };
    let mut lengths = composition_lengths.clone();
    lengths.sort_unstable();
    ensure(*cokernel_length == 12, || format!("cokernel length {cokernel_length}"))?;
    ensure(lengths == [2, 4, 6], || format!("composition lengths {lengths:?}"))?;
    ensure(lie.value == int(6), || format!("lie-coker value {}", lie.value))?;
    let disc = conductor_induced_discriminant(&d.l).map_err(|e| e.to_string())?.value;
    ensure(disc == int(6), || format!("discriminant value {disc}"))?;
    Ok(format!(
        "length {cokernel_length}, composition {lengths:?}, lie-coker {}, discriminant {disc}",
        lie.value
    ))
}

fn non_additivity() -> Outcome {
    let d = imperfect_residue(32).map_err(|e| e.to_string())?;
    let c_f = conductor_induced_discriminant(&d.f).map_err(|e| e.to_string())?.value;
    let c_t = conductor_from_resolution(&d.resolution)
        .map_err(|e| e.to_string())?
        .value;
    let c_t1 = conductor_from_resolution(&d.resolutions_ti[0])
        .map_err(|e| e.to_string())?
        .value;
    let c_t2 = conductor_from_resolution(&d.resolutions_ti[1])
        .map_err(|e| e.to_string())?
        .value;
    let defect = additivity_defect(c_t1, c_t, c_t2);
    ensure(c_f == int(2), || format!("c(Res_F) = {c_f}"))?;
    ensure(c_t == int(4), || format!("c(T) = {c_t}"))?;
    ensure(defect == int(1), || format!("defect {defect}"))?;
    Ok(format!("c(Res_F) = {c_f}, c(T) = {c_t}, defect {defect}"))
}

fn family_crosscheck() -> Outcome {
    let family = ramified_family(32).map_err(|e| e.to_string())?;
    ensure(family.len() >= 20, || format!("only {} extensions", family.len()))?;
    let mut degrees = Vec::new();
    for ext in &family {
        let w = ramification_filtration_from_extension(ext).map_err(|e| format!("{}: {e}", ext.name()))?;
        let half_a =
            artin_conductor(&GLattice::regular(w.data.group().clone()), &w.data).map_err(|e| e.to_string())? / 2;
        let v_disc = discriminant_of_algebra(ext.algebra())
            .valuation()
            .finite()
            .ok_or("discriminant is zero")?;
        let half_disc = Rational64::new(i64::from(v_disc), 2);
        let lie = conductor_induced_liecoker(ext, ext).map_err(|e| e.to_string())?.value;
        ensure(half_a == half_disc && half_disc == lie, || {
            format!(
                "{}: formula {half_a}, discriminant {half_disc}, lie-coker {lie}",
                ext.name()
            )
        })?;
        degrees.push(ext.degree());
    }
    Ok(format!(
        "{} extensions of degree {}..={} agree",
        family.len(),
        degrees.iter().min().unwrap(),
        degrees.iter().max().unwrap()
    ))
}

fn gamma_chi() -> Outcome {
    let mut r = rng(2024);
    let mut per_field = Vec::new();
    for field in random::residue_fields() {
        let ring = BaseDvr::new(field, 32).map_err(|e| e.to_string())?;
        for _ in 0..40 {
            let c = random::generically_exact_complex(&mut r, &ring, 5, 4).map_err(|e| e.to_string())?;
            let chi = c.complex.chi().map_err(|e| e.to_string())?;
            let gamma = c.complex.gamma().map_err(|e| e.to_string())?;
            ensure(chi == c.expected_chi && gamma == chi, || {
                format!("over {field}: chi {chi}, gamma {gamma}, constructed {}", c.expected_chi)
            })?;
        }
        per_field.push(format!("40 over {field}"));
    }
    Ok(format!("gamma = chi on {}", per_field.join(", ")))
}

fn brute_force_cokernels() -> Outcome {
    let mut r = rng(77);
    let field = CoefficientField::prime(2).map_err(|e| e.to_string())?;
    let count = 60;
    for _ in 0..count {
        let n = r.gen_range(2..=6u32);
        let ring = BaseDvr::new(field, n).map_err(|e| e.to_string())?;
        let rows = r.gen_range(1..=3usize);
        let cols = r.gen_range(rows..=3usize);
        let vals: Vec<u32> = (0..rows).map(|_| r.gen_range(0..n)).collect();
        let m = random::matrix_with_divisors(&mut r, &ring, rows, cols, &vals).map_err(|e| e.to_string())?;
        let bits: Vec<Vec<u64>> = m
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|x| brute::series_bits(x, n)).collect())
            .collect();
        let enumerated = u64::from(brute::cokernel_log2(&bits, n));
        let Length::Finite(len) = cokernel_length(&m).map_err(|e| e.to_string())? else {
            return Err(format!("infinite cokernel for divisors {vals:?}"));
        };
        ensure(len == enumerated, || {
            format!("precision {n}, divisors {vals:?}: smith {len}, enumerated {enumerated}")
        })?;
    }
    Ok(format!("{count} matrices over F_2 at precision <= 6"))
}

fn lattice_properties() -> Outcome {
    let mut r = rng(31337);
    let groups = random::groups();
    let (pairs, triples) = (60, 30);
    for _ in 0..pairs {
        let g = &groups[r.gen_range(0..groups.len())];
        let l = random::lattice(&mut r, g, 8).map_err(|e| e.to_string())?;
        let (m, inclusion) = random::finite_index_sublattice(&mut r, &l).map_err(|e| e.to_string())?;
        let filt = random::filtration(&mut r, g).map_err(|e| e.to_string())?;
        let check = isogeny_invariance_check(&l, &m, &inclusion, &filt).map_err(|e| e.to_string())?;
        ensure(check.invariant(), || {
            format!(
                "index {}: {} vs {}",
                check.index, check.conductor_target, check.conductor_source
            )
        })?;
    }
    for _ in 0..triples {
        let g = &groups[r.gen_range(0..groups.len())];
        let seq = random::exact_sequence(&mut r, g).map_err(|e| e.to_string())?;
        let filt = random::filtration(&mut r, g).map_err(|e| e.to_string())?;
        let defect = additivity_from_formula(&seq, &filt).map_err(|e| e.to_string())?;
        ensure(defect == int(0), || format!("additivity defect {defect}"))?;
    }
    Ok(format!("{pairs} isogenous pairs, {triples} exact triples"))
}

fn counterexample_contrast() -> Outcome {
    let out = conductor_workbench::run(["conductor-workbench", "examples", "corollary-4.5"]);
    ensure(out.code == 0, || format!("exit {}: {}", out.code, out.stderr))?;
    let v: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let checks = v["checks"].as_array().ok_or("no checks in the report")?;
    let computed = |prefix: &str| -> Vec<String> {
        checks
            .iter()
            .filter(|c| c["check"].as_str().is_some_and(|s| s.starts_with(prefix)))
            .map(|c| c["computed"].as_str().unwrap_or_default().to_string())
            .collect()
    };
    let direct_defect = computed("direct: defect");
    let direct_pair = computed("direct: c(T) vs");
    let direct_invariant = computed("direct: isogeny invariant");
    let formula_defects = computed("formula: defect");
    let formula_invariant = computed("formula: isogeny invariant");
    ensure(direct_defect == ["1/1"], || format!("direct defect {direct_defect:?}"))?;
    ensure(direct_pair == ["4/1 vs 3/1"], || {
        format!("direct conductors {direct_pair:?}")
    })?;
    ensure(direct_invariant == ["false"], || {
        format!("direct invariance {direct_invariant:?}")
    })?;
    ensure(
        !formula_defects.is_empty() && formula_defects.iter().all(|d| d == "0/1"),
        || format!("formula defects {formula_defects:?}"),
    )?;
    ensure(
        !formula_invariant.is_empty() && formula_invariant.iter().all(|d| d == "true"),
        || format!("formula invariance {formula_invariant:?}"),
    )?;
    Ok(format!(
        "formula: defect 0 and invariant on {} filtrations; direct: defect 1, conductors 4/1 vs 3/1",
        formula_defects.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            1,
            "quadratic conductors c(T_i) = i by discriminant",
            Duration::from_secs(1),
            quadratic_conductors,
        ),
        (
            2,
            "compositum cokernel and conductor",
            Duration::from_secs(1),
            compositum,
        ),
        (
            3,
            "imperfect-residue non-additivity",
            Duration::from_secs(1),
            non_additivity,
        ),
        (
            4,
            "formula = discriminant = lie-coker on a ramified family",
            Duration::from_secs(10),
            family_crosscheck,
        ),
        (5, "gamma = chi on random complexes", Duration::from_secs(30), gamma_chi),
        (
            6,
            "Smith lengths against enumeration",
            Duration::from_secs(30),
            brute_force_cokernels,
        ),
        (
            7,
            "isogeny invariance and additivity of the formula",
            Duration::from_secs(10),
            lattice_properties,
        ),
        (
            8,
            "formula path against direct path in one examples run",
            Duration::from_secs(30),
            counterexample_contrast,
        ),
    ];
    let mut failures = 0;
    for (n, title, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(detail) if elapsed <= limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over the time limit")),
            Err(why) => ("FAIL", why),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} criterion {n}: {title} ({:.1} ms, limit {} s): {detail}",
            elapsed.as_secs_f64() * 1e3,
            limit.as_secs()
        );
    }
    if failures == 0 {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria fail");
        ExitCode::FAILURE
    }
}
