//! Generators for the worst-case families and for seeded random instances.
//!
//! Universe items are numbered from 0, so the set `{i, .., n}` of the
//! one-based textbook description becomes `{i-1, .., n-1}` here. Element
//! labels keep the one-based names (`x1`, `y1`, ...).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::{Closure, Instance};
use crate::{Error, Result};

fn labels(prefix: &str, range: impl Iterator<Item = usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// `n` unit singletons plus one set of weight `c` covering everything.
///
/// Elements `0..n` are `x1..xn`, element `n` is `y`.
pub fn superfluous_cover(n: usize, c: u64) -> Result<Instance> {
    if n < 1 || c < 2 {
        return Err(Error::InvalidConfig(format!(
            "superfluous_cover needs n >= 1 and c >= 2, got n={n}, c={c}"
        )));
    }
    let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    sets.push((0..n).collect());
    let mut weights = vec![1; n];
    weights.push(c);
    let mut names = labels("x", 1..=n);
    names.push("y".into());
    Instance::set_cover(n, sets, weights)?.with_labels(names)
}

/// The procrastination cover: unit singletons `x_i = {i}` and suffix sets
/// `y_i = {i, .., n}` of weight `c`.
///
/// Elements `0..n` are `x1..xn`, elements `n..2n` are `y1..yn`.
pub fn isc(n: usize, c: u64) -> Result<Instance> {
    if n < 1 || c < 2 {
        return Err(Error::InvalidConfig(format!(
            "isc needs n >= 1 and c >= 2, got n={n}, c={c}"
        )));
    }
    let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    sets.extend((0..n).map(|i| (i..n).collect()));
    let mut weights = vec![1; n];
    weights.extend(std::iter::repeat_n(c, n));
    let mut names = labels("x", 1..=n);
    names.extend(labels("y", 1..=n));
    Instance::set_cover(n, sets, weights)?.with_labels(names)
}

/// The raw family `{y1}, {x1, y2}, .., {x1..x(n-1), yn}, {x1..xn}` with the
/// given weights. Elements `0..n` are `x1..xn`, `n..2n` are `y1..yn`.
pub fn jn(n: usize, wx: &[u64], wy: &[u64]) -> Result<Instance> {
    if n < 1 || wx.len() != n || wy.len() != n {
        return Err(Error::InvalidConfig(format!(
            "jn needs n >= 1 and n weights per side, got n={n}, |wx|={}, |wy|={}",
            wx.len(),
            wy.len()
        )));
    }
    let mut family: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut s: Vec<usize> = (0..i).collect();
            s.push(n + i);
            s
        })
        .collect();
    family.push((0..n).collect());
    let mut weights = wx.to_vec();
    weights.extend_from_slice(wy);
    let mut names = labels("x", 1..=n);
    names.extend(labels("y", 1..=n));
    Instance::explicit(family, weights, Closure::Raw)?.with_labels(names)
}

/// The tight independent-set family: a clique `x0..xk` with `w(xi) = beta^i`
/// and unit vertices `yi` adjacent to `xi..xk`.
///
/// Elements `0..k` are `y1..yk`, elements `k..=2k` are `x0..xk`.
pub fn gk(k: usize, beta: u64) -> Result<Instance> {
    if k < 1 || beta < 2 {
        return Err(Error::InvalidConfig(format!(
            "gk needs k >= 1 and an integer beta >= 2, got k={k}, beta={beta}"
        )));
    }
    let y = |i: usize| i - 1;
    let x = |i: usize| k + i;
    let mut edges = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            edges.push((x(i), x(j)));
        }
    }
    for i in 1..=k {
        for j in i..=k {
            edges.push((y(i), x(j)));
        }
    }
    let mut weights = vec![1u64; k];
    for i in 0..=k {
        weights.push(checked_pow(beta, i)?);
    }
    let mut names = labels("y", 1..=k);
    names.extend(labels("x", 0..=k));
    Instance::independent_set(edges, weights)?.with_labels(names)
}

/// The knapsack analogue of [`gk`]: `n = 2k + 1` items, capacity `n`,
/// `v_i = beta^(k+1-i)` and load `n - (i - 1)` for `i <= k + 1`, unit value
/// and load for the rest.
pub fn knapsack_family(k: usize, beta: u64) -> Result<Instance> {
    if k < 1 || beta < 2 {
        return Err(Error::InvalidConfig(format!(
            "knapsack_family needs k >= 1 and an integer beta >= 2, got k={k}, beta={beta}"
        )));
    }
    let n = 2 * k + 1;
    let mut values = Vec::with_capacity(n);
    let mut loads = Vec::with_capacity(n);
    for i in 1..=n {
        if i <= k + 1 {
            values.push(checked_pow(beta, k + 1 - i)?);
            loads.push((n - (i - 1)) as u64);
        } else {
            values.push(1);
            loads.push(1);
        }
    }
    Instance::knapsack(values, loads, n as u64)?.with_labels(labels("i", 1..=n))
}

fn checked_pow(base: u64, exp: usize) -> Result<u64> {
    base.checked_pow(exp as u32)
        .ok_or_else(|| Error::InvalidConfig(format!("{base}^{exp} overflows 64 bits")))
}

/// Random `d`-set cover: `m` sets of size `1..=d` over `0..n` with weights in
/// `1..=wmax`. Items left uncovered get a singleton set of weight `wmax`.
pub fn random_d_cover(seed: u64, n: usize, m: usize, d: usize, wmax: u64) -> Result<Instance> {
    if n < 1 || d < 1 || d > n || wmax < 1 {
        return Err(Error::InvalidConfig(format!(
            "random_d_cover needs 1 <= d <= n and wmax >= 1, got n={n}, d={d}, wmax={wmax}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for _ in 0..m {
        let size = rng.gen_range(1..=d);
        let mut s = sample(&mut rng, n, size).into_vec();
        s.sort_unstable();
        sets.push(s);
        weights.push(rng.gen_range(1..=wmax));
    }
    let mut patched = 0;
    for item in 0..n {
        if !sets.iter().any(|s| s.contains(&item)) {
            sets.push(vec![item]);
            weights.push(wmax);
            patched += 1;
        }
    }
    let inst = Instance::set_cover(n, sets, weights)?;
    Ok(if patched > 0 {
        inst.with_note(format!(
            "{patched} uncovered items patched with singleton sets of weight {wmax}"
        ))
    } else {
        inst
    })
}

/// Random `d`-hitting set: up to `m` distinct sets of exactly `d` points
/// over `0..n`, point weights in `1..=wmax`.
pub fn random_d_hitting(seed: u64, n: usize, m: usize, d: usize, wmax: u64) -> Result<Instance> {
    if n < 1 || d < 1 || d > n || m < 1 || wmax < 1 {
        return Err(Error::InvalidConfig(format!(
            "random_d_hitting needs 1 <= d <= n, m >= 1 and wmax >= 1, got n={n}, m={m}, d={d}, wmax={wmax}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=wmax)).collect();
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(m);
    for _ in 0..m * 8 {
        if sets.len() == m {
            break;
        }
        let mut s = sample(&mut rng, n, d).into_vec();
        s.sort_unstable();
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    Instance::hitting_set(sets, weights)
}

/// Random weighted graph for independent set; each edge present with
/// probability `percent / 100`.
pub fn random_independent_set(seed: u64, n: usize, percent: u32, wmax: u64) -> Result<Instance> {
    if n < 1 || wmax < 1 || percent > 100 {
        return Err(Error::InvalidConfig(format!(
            "random_independent_set needs n >= 1, wmax >= 1, percent <= 100, got n={n}, wmax={wmax}, percent={percent}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=wmax)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_range(0..100) < percent {
                edges.push((u, v));
            }
        }
    }
    Instance::independent_set(edges, weights)
}

/// Random knapsack with values in `1..=wmax`, loads in `1..=lmax` and the
/// capacity set to half the total load (at least the largest load).
pub fn random_knapsack(seed: u64, n: usize, wmax: u64, lmax: u64) -> Result<Instance> {
    if n < 1 || wmax < 1 || lmax < 1 {
        return Err(Error::InvalidConfig(format!(
            "random_knapsack needs n, wmax, lmax >= 1, got n={n}, wmax={wmax}, lmax={lmax}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=wmax)).collect();
    let loads: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=lmax)).collect();
    let total: u64 = loads.iter().sum();
    let largest = *loads.iter().max().expect("n >= 1");
    Instance::knapsack(values, loads, (total / 2).max(largest))
}
