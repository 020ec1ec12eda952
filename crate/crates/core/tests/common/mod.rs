//! Independent reference implementations used to check the library.
//! Nothing in here calls the code paths it is compared against.
#![allow(dead_code)]

use std::path::PathBuf;

pub fn data_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

pub fn read_data(rel: &str) -> String {
    std::fs::read_to_string(data_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// SGNS loss written out directly from its definition.
pub fn sgns_loss(center: &[f64], context: &[f64], negatives: &[Vec<f64>]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let log_sig = |x: f64| -(1.0 + (-x).exp()).ln();
    let mut loss = -log_sig(dot(context, center));
    for n in negatives {
        loss -= log_sig(-dot(n, center));
    }
    loss
}

/// Central finite difference of `f` along every coordinate of `x`.
pub fn finite_difference(x: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + h;
            let up = f(&probe);
            probe[i] = orig - h;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn max_relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let diff: Vec<f64> = analytic.iter().zip(numeric).map(|(a, b)| a - b).collect();
    inf(&diff) / inf(analytic).max(inf(numeric)).max(1e-12)
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Exhaustive nearest-neighbor scan over `(token, vector)` rows.
pub fn scan_nearest(
    rows: &[(String, Vec<f64>)],
    query: &[f64],
    k: usize,
    skip: &[&str],
) -> Vec<(String, f64)> {
    let mut scored: Vec<(usize, f64)> = rows
        .iter()
        .enumerate()
        .filter(|(_, (t, _))| !t.starts_with("__frame__:") && !skip.contains(&t.as_str()))
        .map(|(i, (_, v))| (i, cosine(query, v)))
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    scored
        .into_iter()
        .take(k)
        .map(|(i, c)| (rows[i].0.clone(), c))
        .collect()
}

/// Krippendorff's alpha by explicit enumeration of value pairs.
/// `level`: 0 nominal, 1 ordinal, 2 interval.
pub fn alpha_by_pairs(rows: &[Vec<Option<u8>>], level: u8) -> f64 {
    let items = rows[0].len();
    let units: Vec<Vec<u8>> = (0..items)
        .map(|i| rows.iter().filter_map(|r| r[i]).collect::<Vec<u8>>())
        .filter(|u| u.len() >= 2)
        .collect();
    let pooled: Vec<u8> = units.iter().flatten().copied().collect();
    let n = pooled.len() as f64;
    let mut freq = [0.0f64; 5];
    for &v in &pooled {
        freq[v as usize] += 1.0;
    }
    let delta = |a: u8, b: u8| -> f64 {
        match level {
            0 => (a != b) as u8 as f64,
            1 => {
                let (lo, hi) = (a.min(b) as usize, a.max(b) as usize);
                let s: f64 = (lo..=hi).map(|g| freq[g]).sum::<f64>()
                    - (freq[a as usize] + freq[b as usize]) / 2.0;
                s * s
            }
            _ => (a as f64 - b as f64).powi(2),
        }
    };

    let mut d_o = 0.0;
    for u in &units {
        let m = u.len() as f64;
        let mut s = 0.0;
        for i in 0..u.len() {
            for j in 0..u.len() {
                if i != j {
                    s += delta(u[i], u[j]);
                }
            }
        }
        d_o += s / (m - 1.0);
    }
    d_o /= n;

    let mut d_e = 0.0;
    for i in 0..pooled.len() {
        for j in 0..pooled.len() {
            if i != j {
                d_e += delta(pooled[i], pooled[j]);
            }
        }
    }
    d_e /= n * (n - 1.0);
    if d_e == 0.0 {
        return 1.0;
    }
    1.0 - d_o / d_e
}

/// Two-sided tail probability of Student's t with integer degrees of
/// freedom, from the finite trigonometric series for P(|T| <= t).
pub fn t_two_sided_p(t: f64, df: u32) -> f64 {
    let nu = df as f64;
    let theta = (t.abs() / nu.sqrt()).atan();
    let (s, c) = theta.sin_cos();
    let a = if df % 2 == 1 {
        let mut sum = 0.0;
        if df > 1 {
            let mut term = c;
            sum = term;
            let mut k = 1;
            while 2 * k + 1 < df {
                term *= c * c * (2 * k) as f64 / (2 * k + 1) as f64;
                sum += term;
                k += 1;
            }
        }
        2.0 / std::f64::consts::PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1;
        while 2 * k < df {
            term *= c * c * (2 * k - 1) as f64 / (2 * k) as f64;
            sum += term;
            k += 1;
        }
        s * sum
    };
    1.0 - a
}

/// Paired t statistic straight from the textbook formula.
pub fn paired_t(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let ss: f64 = d.iter().map(|x| (x - mean) * (x - mean)).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    mean / (sd / n.sqrt())
}

/// Pearson chi-square statistic against a uniform expectation.
pub fn chi_square_uniform(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}
