//! Test-only references: a dense re-ranking implementation with no sparsity,
//! no inverted index and no shared code with the library, plus a
//! quadratic-time metric scorer.
#![allow(dead_code)]

use std::collections::HashSet;

pub struct RefParams {
    pub num_parts: usize,
    pub k1: usize,
    pub k2: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub iterations: usize,
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter().map(|x| x / n).collect()
    } else {
        v.to_vec()
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (s.sqrt() / 2.0).min(1.0)
}

/// Rank (1-based) of every column in a row; `owner` forces itself first.
fn rank_row(row: &[f64], owner: Option<usize>) -> Vec<usize> {
    let n = row.len();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.sort_by(|&a, &b| {
        let key = |x: usize| (owner != Some(x), row[x]);
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.partial_cmp(&kb.1).unwrap())
            .then(a.cmp(&b))
    });
    let mut r = vec![0; n];
    for (pos, &g) in ids.iter().enumerate() {
        r[g] = pos + 1;
    }
    r
}

pub fn dense_jaccard(a: &[f64], b: &[f64]) -> f64 {
    let mut mn = 0.0;
    let mut mx = 0.0;
    for (x, y) in a.iter().zip(b) {
        mn += x.min(*y);
        mx += x.max(*y);
    }
    if mx == 0.0 {
        1.0
    } else {
        (1.0 - mn / mx).clamp(0.0, 1.0)
    }
}

fn encode(r_x: &[usize], r_g: &[Vec<usize>], k1: usize) -> Vec<f64> {
    let n = r_x.len();
    let mut v = vec![0.0; n];
    for j in 0..n {
        if r_x[j] > k1 {
            continue;
        }
        let mut s = 1.0 / r_x[j] as f64;
        for m in 0..n {
            if r_x[m] <= k1 {
                s += 1.0 / (r_g[m][j] as f64 * (1.0 + r_x[m] as f64));
            }
        }
        v[j] = s;
    }
    v
}

fn enhance(own: &[f64], r_x: &[usize], raw_g: &[Vec<f64>], k2: usize) -> Vec<f64> {
    let n = own.len();
    let mut out = own.to_vec();
    for i in 0..n {
        if r_x[i] <= k2 {
            for j in 0..n {
                out[j] += raw_g[i][j];
            }
        }
    }
    out.iter().map(|x| x / (1.0 + k2 as f64)).collect()
}

/// Final probe-by-gallery distances of the full algorithm, evaluated densely.
pub fn reference_rerank(probes: &[Vec<f64>], galleries: &[Vec<f64>], p: &RefParams) -> Vec<Vec<f64>> {
    let dim = galleries[0].len();
    let n_p = probes.len();
    let n_g = galleries.len();
    let base = dim / p.num_parts;
    let extra = dim % p.num_parts;

    let mut per_part_probe: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut per_part_gallery: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut start = 0;
    for l in 0..p.num_parts {
        let size = base + if l < extra { 1 } else { 0 };
        let cols = start..start + size;
        start += size;
        let ps: Vec<Vec<f64>> = probes.iter().map(|r| normalize(&r[cols.clone()])).collect();
        let gs: Vec<Vec<f64>> = galleries.iter().map(|r| normalize(&r[cols.clone()])).collect();
        let mut qg: Vec<Vec<f64>> = ps.iter().map(|a| gs.iter().map(|b| dist(a, b)).collect()).collect();
        let mut gg: Vec<Vec<f64>> = gs.iter().map(|a| gs.iter().map(|b| dist(a, b)).collect()).collect();
        for (i, row) in gg.iter_mut().enumerate() {
            row[i] = 0.0;
        }

        let mut t = 1;
        loop {
            let rp: Vec<Vec<usize>> = qg.iter().map(|row| rank_row(row, None)).collect();
            let rg: Vec<Vec<usize>> = gg.iter().enumerate().map(|(i, row)| rank_row(row, Some(i))).collect();
            let raw_g: Vec<Vec<f64>> = (0..n_g).map(|i| encode(&rg[i], &rg, p.k1)).collect();
            let vg: Vec<Vec<f64>> = (0..n_g).map(|i| enhance(&raw_g[i], &rg[i], &raw_g, p.k2)).collect();
            let vp: Vec<Vec<f64>> = (0..n_p)
                .map(|q| enhance(&encode(&rp[q], &rg, p.k1), &rp[q], &raw_g, p.k2))
                .collect();
            if t == p.iterations {
                per_part_probe.push(vp);
                per_part_gallery.push(vg);
                break;
            }
            let lam = p.lambda;
            for q in 0..n_p {
                for g in 0..n_g {
                    qg[q][g] = (1.0 - lam) * qg[q][g] + lam * dense_jaccard(&vp[q], &vg[g]);
                }
            }
            let old = gg.clone();
            for i in 0..n_g {
                for j in 0..n_g {
                    if i == j {
                        gg[i][j] = 0.0;
                        continue;
                    }
                    let a = (1.0 - lam) * old[i][j] + lam * dense_jaccard(&vg[i], &vg[j]);
                    let b = (1.0 - lam) * old[j][i] + lam * dense_jaccard(&vg[j], &vg[i]);
                    gg[i][j] = ((a + b) / 2.0).clamp(0.0, 1.0);
                }
            }
            t += 1;
        }
    }

    let fuse = |vs: Vec<&Vec<f64>>| -> Vec<f64> {
        (0..n_g)
            .map(|j| {
                let s: f64 = vs.iter().map(|v| v[j].powf(p.alpha)).sum::<f64>() / vs.len() as f64;
                s.powf(1.0 / p.alpha)
            })
            .collect()
    };
    let fp: Vec<Vec<f64>> = (0..n_p)
        .map(|q| fuse(per_part_probe.iter().map(|part| &part[q]).collect()))
        .collect();
    let fg: Vec<Vec<f64>> = (0..n_g)
        .map(|g| fuse(per_part_gallery.iter().map(|part| &part[g]).collect()))
        .collect();
    fp.iter().map(|a| fg.iter().map(|b| dense_jaccard(a, b)).collect()).collect()
}

/// Quadratic-time scorer: AP and first-hit rank for one probe, counting
/// preceding items explicitly for every relevant position.
pub fn reference_probe_score(
    ranked: &[u32],
    person: &[i64],
    camera: &[i64],
    probe: (i64, i64),
) -> Option<(f64, usize)> {
    let is_junk = |g: usize| person[g] == probe.0 && camera[g] == probe.1;
    let is_rel = |g: usize| person[g] == probe.0 && camera[g] != probe.1;
    let n_rel = (0..person.len()).filter(|&g| is_rel(g)).count();
    if n_rel == 0 {
        return None;
    }
    let mut ap = 0.0;
    let mut first = usize::MAX;
    for (pos, &g) in ranked.iter().enumerate() {
        let g = g as usize;
        if !is_rel(g) {
            continue;
        }
        let eff = ranked[..=pos].iter().filter(|&&h| !is_junk(h as usize)).count();
        let hits = ranked[..=pos].iter().filter(|&&h| is_rel(h as usize)).count();
        ap += hits as f64 / eff as f64;
        first = first.min(eff);
    }
    Some((ap / n_rel as f64, first))
}

pub fn as_set(v: &[usize]) -> HashSet<usize> {
    v.iter().copied().collect()
}
