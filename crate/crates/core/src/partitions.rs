//! Integer partitions, K-labeled partitions, and Maya-diagram border strip
//! moves with fermionic signs.
//!
//! The border strip routines here are the single code path used both by the
//! character recursion and by the bosonic operators on the infinite wedge,
//! so the sign convention is guaranteed consistent across modules: the sign
//! of moving a stone is (-1)^(number of stones strictly between source and
//! target), which equals (-1)^(height-1) of the border strip.

use crate::algebra::{rat, Rat};
use crate::groups::{FiniteAbelianGroup, KElem};

/// A weakly decreasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of contents j-i over the cells (i,j) of the diagram, the
    /// eigenvalue of the second completed-cycle operator in charge zero.
    pub fn content_sum(&self) -> i64 {
        let mut total = 0i64;
        for (i, &p) in self.parts.iter().enumerate() {
            // row i (0-based): contents -i, -i+1, ..., -i+p-1
            let i = i as i64;
            let p = p as i64;
            total += p * (p - 1) / 2 - i * p;
        }
        total
    }

    /// |Aut| of the multiset of parts: product of factorials of
    /// multiplicities.
    pub fn aut(&self) -> Rat {
        let mut f = rat(1);
        let mut run = 1u64;
        for w in self.parts.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                f = f * crate::algebra::factorial(run);
                run = 1;
            }
        }
        if !self.parts.is_empty() {
            f = f * crate::algebra::factorial(run);
        }
        f
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// All partitions of d in reverse-lexicographic order ((d) first, (1^d) last).
pub fn enumerate_partitions(d: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u64> = Vec::new();
    fn rec(remaining: u64, max_part: u64, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        let top = remaining.min(max_part);
        for p in (1..=top).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(d, d, &mut current, &mut out);
    out
}

/// A partition with parts labeled by elements of a finite abelian group K;
/// indexes a conjugacy class of the wreath product K wr S_d. Multiset
/// semantics: parts are kept in a canonical sorted order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KLabeledPartition {
    parts: Vec<(u64, KElem)>,
}

impl KLabeledPartition {
    pub fn new(mut parts: Vec<(u64, KElem)>) -> Self {
        parts.retain(|(p, _)| *p > 0);
        parts.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        KLabeledPartition { parts }
    }

    pub fn empty() -> Self {
        KLabeledPartition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[(u64, KElem)] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|(p, _)| p).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn underlying(&self) -> Partition {
        Partition::new(self.parts.iter().map(|(p, _)| *p).collect())
    }

    /// The sub-partition of parts carrying a given label.
    pub fn sublabel(&self, label: &KElem) -> Partition {
        Partition::new(
            self.parts
                .iter()
                .filter(|(_, l)| l == label)
                .map(|(p, _)| *p)
                .collect(),
        )
    }

    pub fn aut(&self) -> Rat {
        let mut f = rat(1);
        let mut run = 1u64;
        for w in self.parts.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                f = f * crate::algebra::factorial(run);
                run = 1;
            }
        }
        if !self.parts.is_empty() {
            f = f * crate::algebra::factorial(run);
        }
        f
    }

    /// Text form "2_0 1_1" (part_label, labels as dot-joined residues).
    pub fn text(&self) -> String {
        if self.parts.is_empty() {
            return "-".to_string();
        }
        self.parts
            .iter()
            .map(|(p, l)| format!("{}_{}", p, l.text()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Centralizer order z(mu) = |Aut(mu)| * prod |K| * mu_i of a class of
/// K wr S_d, for abelian K.
pub fn centralizer_order(mu: &KLabeledPartition, group: &FiniteAbelianGroup) -> Rat {
    let mut z = mu.aut();
    for (p, _) in mu.parts() {
        z = z * rat((group.order() * p) as i64);
    }
    z
}

/// All K-labeled partitions of d, deterministically ordered.
pub fn enumerate_labeled_partitions(d: u64, group: &FiniteAbelianGroup) -> Vec<KLabeledPartition> {
    let elements = group.elements();
    let mut out = Vec::new();
    for lambda in enumerate_partitions(d) {
        // group equal parts, assign multisets of labels to each run
        let mut runs: Vec<(u64, usize)> = Vec::new();
        for &p in lambda.parts() {
            if let Some(last) = runs.last_mut() {
                if last.0 == p {
                    last.1 += 1;
                    continue;
                }
            }
            runs.push((p, 1));
        }
        let mut assignments: Vec<Vec<(u64, KElem)>> = vec![Vec::new()];
        for (p, count) in runs {
            let choices = multisets(&elements, count);
            let mut next = Vec::new();
            for a in &assignments {
                for ch in &choices {
                    let mut b = a.clone();
                    for l in ch {
                        b.push((p, l.clone()));
                    }
                    next.push(b);
                }
            }
            assignments = next;
        }
        for a in assignments {
            out.push(KLabeledPartition::new(a));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn multisets(elements: &[KElem], count: usize) -> Vec<Vec<KElem>> {
    fn rec(elements: &[KElem], start: usize, count: usize, cur: &mut Vec<KElem>, out: &mut Vec<Vec<KElem>>) {
        if count == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..elements.len() {
            cur.push(elements[i].clone());
            rec(elements, i, count - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(elements, 0, count, &mut Vec::new(), &mut out);
    out
}

/// Age of a tuple of Z_r residues: sum of a_i/r with a_i reduced into [0,r).
pub fn age(residues: &[i64], r: u64) -> Rat {
    let mut total = rat(0);
    for &a in residues {
        let a = a.rem_euclid(r as i64);
        total = total + Rat::new(a.into(), (r as i64).into());
    }
    total
}

// ---- Maya diagram machinery ----

/// Stone occupancy of a partition on positions [lo, hi]; positions below lo
/// are all occupied by construction of lo.
fn occupancy(parts: &[u64], lo: i64, hi: i64) -> Vec<bool> {
    let ell = parts.len() as i64;
    debug_assert!(lo <= -(ell + 1));
    let mut occ = vec![false; (hi - lo + 1) as usize];
    for (i, &p) in parts.iter().enumerate() {
        let pos = p as i64 - (i as i64 + 1);
        if pos >= lo && pos <= hi {
            occ[(pos - lo) as usize] = true;
        }
    }
    for pos in lo..=(-(ell + 1)) {
        occ[(pos - lo) as usize] = true;
    }
    occ
}

fn partition_from_occupancy(occ: &[bool], lo: i64) -> Partition {
    let mut stones: Vec<i64> = Vec::new();
    for (i, &o) in occ.iter().enumerate().rev() {
        if o {
            stones.push(lo + i as i64);
        }
    }
    // stones is descending; below lo everything is occupied
    let mut parts = Vec::new();
    let mut idx = 1i64;
    for &q in &stones {
        let lam = q + idx;
        if lam > 0 {
            parts.push(lam as u64);
        } else {
            debug_assert!(lam == 0 || !parts.is_empty() || lam < 0);
        }
        idx += 1;
    }
    // once stones reach the vacuum tail, lam = 0 forever; also anything
    // below lo is vacuum by construction
    Partition::new(parts)
}

/// One stone move on the Maya diagram of a partition: the stone at integer
/// position `source` (position = part - row, vacuum occupies all negatives)
/// moved by `delta`, producing `result` with the fermionic `sign`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoneMove {
    pub result: Partition,
    pub sign: i64,
    pub source: i64,
}

/// All single-stone moves by `delta` (positive: up, grows the partition by
/// delta; negative: down). Sign is (-1)^(stones strictly between source and
/// target).
pub fn maya_moves(lambda: &Partition, delta: i64) -> Vec<StoneMove> {
    assert!(delta != 0);
    let ell = lambda.len() as i64;
    let m = delta.abs();
    let lo = -(ell + m + 2);
    let hi = lambda.parts().first().copied().unwrap_or(0) as i64 + m;
    let occ = occupancy(lambda.parts(), lo, hi);
    let mut out = Vec::new();
    let (src_lo, src_hi) = if delta > 0 { (lo, hi - m) } else { (lo + m, hi) };
    for src in src_lo..=src_hi {
        let si = (src - lo) as usize;
        let ti = (src + delta - lo) as usize;
        if !occ[si] || occ[ti] {
            continue;
        }
        let mut no = occ.clone();
        no[si] = false;
        no[ti] = true;
        let (a, b) = (si.min(ti), si.max(ti));
        let crossings = occ[a + 1..b].iter().filter(|&&x| x).count();
        let sign = if crossings % 2 == 0 { 1 } else { -1 };
        out.push(StoneMove {
            result: partition_from_occupancy(&no, lo),
            sign,
            source: src,
        });
    }
    out.sort_by(|a, b| b.result.cmp(&a.result));
    out
}

/// All ways of adding a connected border strip of size m to lambda, with the
/// fermionic sign: the wedge action of the degree -m bosonic operator.
pub fn border_strip_add(lambda: &Partition, m: u64) -> Vec<(Partition, i64)> {
    assert!(m >= 1);
    maya_moves(lambda, m as i64)
        .into_iter()
        .map(|mv| (mv.result, mv.sign))
        .collect()
}

/// All ways of removing a connected border strip of size m, with sign;
/// inverse correspondence to [`border_strip_add`].
pub fn border_strip_remove(lambda: &Partition, m: u64) -> Vec<(Partition, i64)> {
    assert!(m >= 1);
    maya_moves(lambda, -(m as i64))
        .into_iter()
        .map(|mv| (mv.result, mv.sign))
        .collect()
}

/// Positions (part - row) where the Maya diagram differs from the vacuum,
/// split into (filled nonnegative positions, empty negative positions).
pub fn maya_excitations(lambda: &Partition) -> (Vec<i64>, Vec<i64>) {
    let mut filled = Vec::new();
    let mut empty = Vec::new();
    let ell = lambda.len() as i64;
    let occupied: std::collections::BTreeSet<i64> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 - (i as i64 + 1))
        .collect();
    for &p in &occupied {
        if p >= 0 {
            filled.push(p);
        }
    }
    for q in -ell..0 {
        if !occupied.contains(&q) {
            empty.push(q);
        }
    }
    (filled, empty)
}
