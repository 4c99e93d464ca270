mod common;

use common::{rng, tripod};
use mobius_core::decoder::*;
use mobius_core::lattice::*;
use mobius_core::unified::*;
use rand::Rng;

#[test]
fn all_weight_one_errors_decode_for_d_up_to_13() {
    for d in (3..=13).step_by(2) {
        let lat = build_lattice(d).unwrap();
        let uni = build_unified(&lat);
        for q in 0..lat.num_qubits() as QubitId {
            let e = PauliXError::new([q]);
            assert!(
                decode_success(&lat, &uni, &e, &DecoderKind::Moebius),
                "single flip on qubit {q} at d={d}"
            );
            let r = decode_moebius(&uni, &lat.syndrome(&e));
            assert_eq!(r.ell, 3);
        }
    }
}

#[test]
fn alternative_always_flips_the_predicted_class() {
    let mut rng = rng(0xa17f11b);
    for d in [5u32, 7, 9] {
        let lat = build_lattice(d).unwrap();
        let uni = build_unified(&lat);
        let n = lat.num_qubits() as QubitId;
        let mut produced = 0;
        while produced < 3_400 {
            let e = PauliXError::new((0..n).filter(|_| rng.gen_bool(0.08)));
            let syn = lat.syndrome(&e);
            let orig = decode_moebius(&uni, &syn);
            let Some(alt) = alternative_matching(&uni, &syn, &orig) else {
                continue;
            };
            produced += 1;
            // direct recomputation over the returned edge set
            let xor = alt.edges.iter().fold(0u8, |acc, e| acc ^ e.green_parity);
            assert_eq!(xor, alt.parity_alt);
            assert_eq!(alt.parity_alt, 1 ^ orig.predicted_parity, "at d={d}, e={e:?}");
        }
    }
}

/// Every matched length must have the parity of the lightest error that is
/// consistent with the syndrome within the predicted logical class.
#[test]
fn matched_length_parity_matches_lightest_consistent_error_at_d5() {
    let lat = build_lattice(5).unwrap();
    let uni = build_unified(&lat);
    let n = lat.num_qubits();
    assert_eq!(n, 19);
    let faces = lat.num_faces();
    // min weight per (syndrome, class) bucket plus one representative error
    let mut min_w = vec![[u32::MAX; 2]; 1 << faces];
    let mut representative = vec![None; 1 << faces];
    for bits in 0u32..1 << n {
        let support: Vec<QubitId> = (0..n as u32).filter(|q| bits >> q & 1 == 1).collect();
        let e = PauliXError::new(support);
        let syn = lat.syndrome(&e);
        let mut key = 0usize;
        for &(f, _) in syn.defects() {
            key |= 1 << f;
        }
        let class = lat.logical_parity(&e, Color::G) as usize;
        let w = e.weight() as u32;
        if w < min_w[key][class] {
            min_w[key][class] = w;
        }
        if representative[key].is_none() {
            representative[key] = Some(e);
        }
    }
    for key in 0..1 << faces {
        let Some(e) = &representative[key] else { continue };
        let syn = lat.syndrome(e);
        let r = decode_moebius(&uni, &syn);
        let lightest = min_w[key][r.predicted_parity as usize];
        assert_ne!(lightest, u32::MAX);
        assert_eq!(
            r.ell_or % 2,
            lightest % 2,
            "syndrome bucket {key:#b}: ell={} lightest={}",
            r.ell_or,
            lightest
        );
    }
}

#[test]
fn boundary_strings_with_light_branches_are_corrected() {
    for d in [9u32, 11] {
        let lat = build_lattice(d).unwrap();
        let uni = build_unified(&lat);
        let k = (d as i32 - 1) / 2;
        let mut asserted = 0;
        for m_g in 0..=k {
            for m_b in 0..=k {
                let Some(t) = tripod(&lat, m_g, m_b) else { continue };
                // the three strings close into a logical operator
                let logical = t.e.symmetric_difference(&t.c_g).symmetric_difference(&t.c_b);
                assert!(lat.syndrome(&logical).is_empty());
                assert_eq!(lat.logical_parity(&logical, Color::G), 1);
                assert_eq!(t.w + t.w_g + t.w_b, d as usize, "weights at d={d}");
                if 2 * t.w + 1 < 2 * (t.w_g + t.w_b) {
                    assert!(
                        decode_success(&lat, &uni, &t.e, &DecoderKind::Moebius),
                        "branching string w={} w_g={} w_b={} at d={d}",
                        t.w,
                        t.w_g,
                        t.w_b
                    );
                    asserted += 1;
                }
            }
        }
        assert!(asserted >= 2, "too few branching instances at d={d}");
    }
}

fn load_fixture(name: &str) -> PauliXError {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let raw = std::fs::read_to_string(path).unwrap();
    let ids: Vec<QubitId> = serde_json::from_str(&raw).unwrap();
    PauliXError::new(ids)
}

#[test]
fn branching_fixture_defeats_single_matching_at_d9() {
    let d = 9;
    let lat = build_lattice(d).unwrap();
    let uni = build_unified(&lat);
    let e = load_fixture("branch_fail_d9.json");
    assert_eq!(e.weight(), (d as usize - 1) / 2);
    let syn = lat.syndrome(&e);
    let truth = lat.logical_parity(&e, Color::G);
    let orig = decode_moebius(&uni, &syn);
    assert_eq!(orig.ell_or, 11);
    assert_ne!(orig.predicted_parity, truth, "single matching must fail on the fixture");
    let alt = alternative_matching(&uni, &syn, &orig).unwrap();
    assert_eq!(alt.ell_alt, 12);
    let comp = decode_comparative(&uni, &syn, &ComparativeConfig::default(), d).unwrap();
    assert_eq!(comp.variant, Variant::Alternative);
    assert_eq!(comp.predicted_parity, truth);
}

#[test]
fn branching_fixture_lengths_at_d11() {
    let d = 11;
    let lat = build_lattice(d).unwrap();
    let uni = build_unified(&lat);
    let e = load_fixture("branch_fail_d11.json");
    assert_eq!(e.weight(), 5);
    let syn = lat.syndrome(&e);
    let truth = lat.logical_parity(&e, Color::G);
    let orig = decode_moebius(&uni, &syn);
    assert_eq!(orig.ell_or, 12);
    assert_ne!(orig.predicted_parity, truth);
    let alt = alternative_matching(&uni, &syn, &orig).unwrap();
    assert_eq!(alt.ell_alt, 13);
    let comp = decode_comparative(&uni, &syn, &ComparativeConfig::default(), d).unwrap();
    assert_eq!(comp.variant, Variant::Alternative);
    assert_eq!(comp.predicted_parity, truth);
}

#[test]
fn decoding_is_deterministic_across_runs_and_pools() {
    let d = 9;
    let lat = build_lattice(d).unwrap();
    let uni = build_unified(&lat);
    let mut rng = rng(0xdef);
    let n = lat.num_qubits() as QubitId;
    let errors: Vec<PauliXError> =
        (0..200).map(|_| PauliXError::new((0..n).filter(|_| rng.gen_bool(0.1)))).collect();
    let run = |threads: usize| -> Vec<(u8, u32, Option<u32>)> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            errors
                .iter()
                .map(|e| {
                    let syn = lat.syndrome(e);
                    let r = decode_comparative(&uni, &syn, &ComparativeConfig::default(), d)
                        .unwrap();
                    (r.predicted_parity, r.ell, r.ell_alt)
                })
                .collect()
        })
    };
    let base = run(1);
    assert_eq!(base, run(4));
    assert_eq!(base, run(16));
}
