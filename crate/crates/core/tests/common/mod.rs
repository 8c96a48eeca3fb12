#![allow(dead_code)]

pub mod synth;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// Seed and size of the checked-in fixture corpus.
pub const FIXTURE_SEED: u64 = 20170825;
pub const FIXTURE_SIZE: usize = 1000;

/// Brute-force document frequency ranking: counts every distinct term by
/// scanning all documents once per term.
pub fn brute_force_df(docs: &[Vec<String>], k: usize, excluded: &HashSet<String>) -> Vec<(String, u64)> {
    let vocab: BTreeSet<&String> = docs.iter().flatten().collect();
    let mut all: Vec<(String, u64)> = Vec::new();
    for term in vocab {
        if excluded.contains(term) {
            continue;
        }
        let df = docs.iter().filter(|d| d.iter().any(|t| t == term)).count() as u64;
        all.push((term.clone(), df));
    }
    // Selection by repeated maximum, ties to the lexicographically smaller term.
    let mut out = Vec::new();
    while out.len() < k && !all.is_empty() {
        let mut best = 0;
        for i in 1..all.len() {
            let (ref t, d) = all[i];
            let (ref bt, bd) = all[best];
            if d > bd || (d == bd && t < bt) {
                best = i;
            }
        }
        out.push(all.remove(best));
    }
    out
}

/// Geodesic distance on the WGS84 ellipsoid by Vincenty's inverse formula.
pub fn vincenty_m(a: (f64, f64), b: (f64, f64)) -> f64 {
    let semi_major = 6_378_137.0_f64;
    let flat = 1.0 / 298.257_223_563;
    let semi_minor = semi_major * (1.0 - flat);
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let u1 = ((1.0 - flat) * lat1.tan()).atan();
    let u2 = ((1.0 - flat) * lat2.tan()).atan();
    let l = lon2 - lon1;
    let (sin_u1, cos_u1) = u1.sin_cos();
    let (sin_u2, cos_u2) = u2.sin_cos();
    let mut lambda = l;
    for _ in 0..200 {
        let (sin_l, cos_l) = lambda.sin_cos();
        let sin_sigma = ((cos_u2 * sin_l).powi(2) + (cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l).powi(2)).sqrt();
        if sin_sigma == 0.0 {
            return 0.0;
        }
        let cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
        let sigma = sin_sigma.atan2(cos_sigma);
        let sin_alpha = cos_u1 * cos_u2 * sin_l / sin_sigma;
        let cos2_alpha = 1.0 - sin_alpha * sin_alpha;
        let cos_2sm = if cos2_alpha == 0.0 {
            0.0
        } else {
            cos_sigma - 2.0 * sin_u1 * sin_u2 / cos2_alpha
        };
        let c = flat / 16.0 * cos2_alpha * (4.0 + flat * (4.0 - 3.0 * cos2_alpha));
        let prev = lambda;
        lambda = l
            + (1.0 - c) * flat * sin_alpha
                * (sigma + c * sin_sigma * (cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        if (lambda - prev).abs() < 1e-12 {
            let u_sq = cos2_alpha * (semi_major.powi(2) - semi_minor.powi(2)) / semi_minor.powi(2);
            let big_a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
            let big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
            let delta = big_b
                * sin_sigma
                * (cos_2sm
                    + big_b / 4.0
                        * (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
                            - big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) * (-3.0 + 4.0 * cos_2sm * cos_2sm)));
            return semi_minor * big_a * (sigma - delta);
        }
    }
    panic!("vincenty did not converge");
}

/// Ground-truth intensity per (highway, phase) from planted labels, as f64.
pub fn truth_intensity(
    records: &[synth::SynthRecord],
    phase_days: &[u64],
) -> BTreeMap<(String, usize), (u64, Option<f64>)> {
    let mut counts: BTreeMap<(String, usize), u64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.retained()) {
        if let Some(p) = r.phase {
            for h in &r.highways {
                *counts.entry((h.to_string(), p)).or_default() += 1;
            }
        }
    }
    let mut out = BTreeMap::new();
    for h in synth::HIGHWAYS {
        let base = *counts.get(&(h.to_string(), 0)).unwrap_or(&0) as f64 / phase_days[0] as f64;
        for (p, &days) in phase_days.iter().enumerate() {
            let n = *counts.get(&(h.to_string(), p)).unwrap_or(&0);
            let avg = n as f64 / days as f64;
            let intensity = (base > 0.0).then(|| avg / base);
            out.insert((h.to_string(), p), (n, intensity));
        }
    }
    out
}
