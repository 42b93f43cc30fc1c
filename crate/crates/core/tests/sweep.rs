use cayley_spectra::verify::{run_family_sweep, verify_eq24, Outcome, SweepOptions};
use cayley_spectra::{FamilyIndex, LanczosConfig};

fn families(tags: &[&[u8]]) -> Vec<FamilyIndex> {
    tags.iter().map(|t| FamilyIndex::new(t).unwrap()).collect()
}

#[test]
fn repeated_sweeps_agree() {
    let opts = SweepOptions {
        families: Some(families(&[&[1], &[1, 2], &[1, 3], &[4, 6]])),
        ..SweepOptions::default()
    };
    let a = run_family_sweep(&opts).unwrap();
    let b = run_family_sweep(&opts).unwrap();
    assert_eq!(a.verdict_set(), b.verdict_set());
    let lhs = |r: &cayley_spectra::verify::SweepReport| -> Vec<Option<f64>> {
        r.verdicts().map(|v| v.lhs).collect()
    };
    assert_eq!(lhs(&a), lhs(&b));
}

#[test]
fn excluded_family_fails_at_some_depth() {
    let v = verify_eq24(
        FamilyIndex::new(&[1, 3]).unwrap(),
        &LanczosConfig::default(),
    )
    .unwrap();
    assert!(v.iter().any(|v| v.outcome == Outcome::Fail));
    // depth 0 is normal: Lanczos reproduces the character-table value
    let exact = v[0].exact.unwrap() as f64;
    assert!((v[0].lhs.unwrap() - exact).abs() < 1e-6);
}

#[test]
fn allowed_family_passes_at_every_depth() {
    let v = verify_eq24(
        FamilyIndex::new(&[1, 2, 5]).unwrap(),
        &LanczosConfig::default(),
    )
    .unwrap();
    assert_eq!(v.len(), 5);
    assert!(v.iter().all(|v| v.pass));
}
