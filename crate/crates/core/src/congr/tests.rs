use super::*;

fn opts(max: u64) -> RunOptions {
    RunOptions { profile: Profile::Full, max_n: Some(max), max_p: Some(max) }
}

fn record<'a>(r: &'a CaseReport, instance: &str) -> &'a InstanceRecord {
    r.records.iter().find(|x| x.instance == instance).unwrap()
}

#[test]
fn ids_are_unique_and_sorted() {
    let ids = case_ids();
    let mut d = ids.clone();
    d.dedup();
    assert_eq!(ids, d);
    assert_eq!(ids.len(), 22);
}

#[test]
fn t11_p_at_three() {
    let r = run_case("T1.1-p", &opts(3)).unwrap();
    let rec = record(&r, "3");
    // S_3 = 432 and 3*9*2 - 16*27*q_3(2) = 54 - 432 = -378; both are 27 mod 81.
    assert_eq!((rec.lhs_mod.as_str(), rec.rhs_mod.as_str(), rec.modulus.as_str()), ("27", "27", "81"));
    assert_eq!(rec.status, Status::Pass);
}

#[test]
fn t12_at_two() {
    let r = run_case("T1.2-p", &opts(2)).unwrap();
    let rec = record(&r, "2");
    // -20 = 4 mod 8 = 3 * 2^2
    assert_eq!((rec.lhs_mod.as_str(), rec.rhs_mod.as_str()), ("4", "4"));
    let r = run_case("T1.2-odd", &opts(2)).unwrap();
    assert!(r.passed());
    // S_2 / 4 = -5 is odd
    assert_eq!(record(&r, "2").lhs_mod, "1");
}

#[test]
fn empty_range() {
    let r = run_case("T1.1-n", &opts(1)).unwrap();
    assert_eq!(r.instances(), 0);
    assert!(r.passed());
}

#[test]
fn guard_and_unknown() {
    assert!(matches!(run_case("T1.1-n", &opts(100_000)), Err(CongrError::RangeGuard { .. })));
    assert!(matches!(run_case("T9", &opts(5)), Err(CongrError::UnknownCase(_))));
    assert!("fast".parse::<Profile>().is_err());
}

#[test]
fn quick_caps() {
    let q = RunOptions::profile(Profile::Quick);
    assert_eq!(upper_bound(case("T1.1-n").unwrap(), &q).unwrap(), QUICK_MAX_N);
    assert_eq!(upper_bound(case("T1.1-p").unwrap(), &q).unwrap(), QUICK_MAX_P);
    let f = RunOptions::profile(Profile::Full);
    assert_eq!(upper_bound(case("CONJ-1.18").unwrap(), &f).unwrap(), 31);
    assert_eq!(upper_bound(case("T1.6-int").unwrap(), &f).unwrap(), 300);
}

#[test]
fn t14_p_side_condition() {
    let info = case("T1.4-p").unwrap();
    let insts = instances(info, 5);
    assert!(insts.iter().all(|i| {
        let (b, c) = i.bc.unwrap();
        (b * (b - 2 * c)) % i.index as i64 != 0
    }));
    assert!(!insts.iter().any(|i| i.bc == Some((2, 1))));
    // b, c in [-4, 4] at n = 1 gives every pair.
    assert_eq!(instances(case("T1.4-n").unwrap(), 1).len(), 81);
}

#[test]
fn small_runs_pass() {
    for id in case_ids() {
        let r = run_case(id, &opts(12)).unwrap();
        for f in r.failures() {
            panic!("{id} {}: {} vs {} mod {} {:?}", f.instance, f.lhs_mod, f.rhs_mod, f.modulus, f.note);
        }
    }
}

#[test]
fn parallel_order_is_deterministic() {
    let a = run_case("T1.7i-n", &opts(30)).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| run_case("T1.7i-n", &opts(30)).unwrap());
    assert_eq!(a.records, b.records);
}
