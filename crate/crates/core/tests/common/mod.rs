//! Reference implementations used as oracles. Nothing here calls into the
//! library's graph builder, stepper, or detectors.

#![allow(dead_code)]

/// Adjacency lists built directly from part sizes (parts kept in the order
/// given).
pub fn multipartite_adj(parts: &[usize]) -> Vec<Vec<usize>> {
    let label: Vec<usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(p, &s)| std::iter::repeat_n(p, s))
        .collect();
    let n = label.len();
    (0..n)
        .map(|v| (0..n).filter(|&w| label[w] != label[v]).collect())
        .collect()
}

pub fn complete_adj(n: usize) -> Vec<Vec<usize>> {
    multipartite_adj(&vec![1; n])
}

pub fn cycle_adj(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect()
}

pub fn path_adj(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|v| {
            let mut nb = Vec::new();
            if v > 0 {
                nb.push(v - 1);
            }
            if v + 1 < n {
                nb.push(v + 1);
            }
            nb
        })
        .collect()
}

pub fn fires(adj: &[Vec<usize>], s: &[u64]) -> Vec<bool> {
    s.iter().zip(adj).map(|(&x, nb)| x >= nb.len() as u64).collect()
}

pub fn step(adj: &[Vec<usize>], s: &[u64]) -> Vec<u64> {
    let f = fires(adj, s);
    (0..s.len())
        .map(|v| {
            let gain = adj[v].iter().filter(|&&w| f[w]).count() as u64;
            let loss = if f[v] { adj[v].len() as u64 } else { 0 };
            s[v] + gain - loss
        })
        .collect()
}

/// `(t0, p)` by storing every state and scanning linearly for a repeat.
pub fn period(adj: &[Vec<usize>], s: &[u64], cap: usize) -> Option<(usize, usize)> {
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut cur = s.to_vec();
    for t in 0..=cap {
        if let Some(i) = seen.iter().position(|x| *x == cur) {
            return Some((i, t - i));
        }
        seen.push(cur.clone());
        cur = step(adj, &cur);
    }
    None
}

/// The `p` states of the periodic orbit.
pub fn orbit(adj: &[Vec<usize>], s: &[u64], cap: usize) -> Vec<Vec<u64>> {
    let (t0, p) = period(adj, s, cap).expect("cap");
    let mut cur = s.to_vec();
    for _ in 0..t0 {
        cur = step(adj, &cur);
    }
    let mut out = Vec::with_capacity(p);
    for _ in 0..p {
        out.push(cur.clone());
        cur = step(adj, &cur);
    }
    out
}

pub fn phi(adj: &[Vec<usize>], s: &[u64], v: usize) -> u64 {
    let f = fires(adj, s);
    adj[v].iter().filter(|&&w| f[w]).count() as u64
}

pub fn confined(adj: &[Vec<usize>], s: &[u64]) -> bool {
    (0..s.len()).all(|v| {
        let p = phi(adj, s, v);
        p <= s[v] && s[v] < p + adj[v].len() as u64
    })
}

pub fn complement(adj: &[Vec<usize>], s: &[u64]) -> Vec<u64> {
    s.iter().zip(adj).map(|(&x, nb)| 2 * nb.len() as u64 - 1 - x).collect()
}

/// Tiny deterministic generator (SplitMix64) so test inputs do not depend
/// on the library's RNG choice.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `0..=hi`.
    pub fn upto(&mut self, hi: u64) -> u64 {
        self.next_u64() % (hi + 1)
    }
}

/// Uniform confined position on `adj`, by rejection.
pub fn random_confined(adj: &[Vec<usize>], rng: &mut SplitMix) -> Vec<u64> {
    loop {
        let s: Vec<u64> = adj.iter().map(|nb| rng.upto(2 * nb.len() as u64 - 1)).collect();
        if confined(adj, &s) {
            return s;
        }
    }
}
