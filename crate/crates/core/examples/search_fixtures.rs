//! One-off search for hard branching errors used as test fixtures.

use mobius_core::decoder::*;
use mobius_core::lattice::*;
use mobius_core::noise::comb;
use mobius_core::unified::*;
use rayon::prelude::*;

fn search(d: u32, w: u64, want_or: u32, want_alt: u32, max_hits: usize) {
    let lat = build_lattice(d).unwrap();
    let uni = build_unified(&lat);
    let n = lat.num_qubits() as u64;
    let total = comb::binomial(n, w);
    println!("d={d} w={w}: scanning {total} configs for ell_or={want_or}, ell_alt={want_alt}");
    let blocks: u64 = 512;
    let hits: Vec<(u64, Vec<u32>, u32, u32, bool)> = (0..blocks)
        .into_par_iter()
        .flat_map(|blk| {
            let lo = blk * total / blocks;
            let hi = (blk + 1) * total / blocks;
            let mut combo = comb::unrank(n, w, lo);
            let mut out = Vec::new();
            let cfg = ComparativeConfig::default();
            for r in lo..hi {
                let e = PauliXError::new(combo.iter().copied());
                let syn = lat.syndrome(&e);
                let truth = lat.logical_parity(&e, Color::G);
                let orig = decode_moebius(&uni, &syn);
                if orig.ell_or == want_or && orig.predicted_parity != truth {
                    if let Some(alt) = alternative_matching(&uni, &syn, &orig) {
                        if alt.ell_alt == want_alt {
                            let comp = decode_comparative(&uni, &syn, &cfg, d).unwrap();
                            let comp_ok = comp.predicted_parity == truth;
                            out.push((r, combo.clone(), orig.ell_or, alt.ell_alt, comp_ok));
                        }
                    }
                }
                if r + 1 < hi {
                    comb::next_combination(n, &mut combo);
                }
            }
            out
        })
        .collect();
    let mut hits = hits;
    hits.sort();
    println!("  {} hits", hits.len());
    for (r, combo, or, alt, ok) in hits.iter().take(max_hits) {
        println!("  rank={r} support={combo:?} ell_or={or} ell_alt={alt} comparative_ok={ok}");
    }
    let all_ok = hits.iter().all(|h| h.4);
    println!("  all comparative-corrected: {all_ok}");
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("d9");
    match which {
        "d9" => search(9, 4, 11, 12, 5),
        "d11" => search(11, 5, 12, 13, 5),
        other => eprintln!("unknown target {other}"),
    }
}
