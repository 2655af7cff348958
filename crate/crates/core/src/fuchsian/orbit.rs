//! Breadth-first orbit enumeration over reduced words.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_complex::Complex64;

use super::group::FuchsianGroup;
use crate::error::{Error, Result};
use crate::geometry::{d_kernel, SU11Element};

pub const DEFAULT_ENTRY_CAP: usize = 500_000;
pub const DEFAULT_DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitEntry {
    /// Symbols in the alphabet of [`FuchsianGroup::symbols`], leftmost applied last.
    pub word: Vec<u8>,
    pub element: SU11Element,
    /// `γ·0`.
    pub point: Complex64,
    /// `|γ·0|`.
    pub radius: f64,
}

impl OrbitEntry {
    pub fn word_length(&self) -> usize {
        self.word.len()
    }

    /// Hyperbolic distance from 0 to `γ·0`.
    pub fn distance(&self) -> f64 {
        2.0 * self.radius.atanh()
    }
}

#[derive(Debug, Clone)]
pub struct OrbitTable {
    entries: Vec<OrbitEntry>,
    max_word_length: usize,
    dedup_tol: f64,
    /// `(min, max)` radius of the elements first reached at each word length.
    shells: Vec<Option<(f64, f64)>>,
    /// No reduced word of length `max_word_length + 1` gives a new element.
    exhausted: bool,
}

pub fn enumerate_orbit(
    group: &FuchsianGroup,
    max_word_length: usize,
    dedup_tol: f64,
) -> Result<OrbitTable> {
    enumerate_orbit_with_cap(group, max_word_length, dedup_tol, DEFAULT_ENTRY_CAP)
}

pub fn enumerate_orbit_with_cap(
    group: &FuchsianGroup,
    max_word_length: usize,
    dedup_tol: f64,
    entry_cap: usize,
) -> Result<OrbitTable> {
    if !(1e-12..=1e-6).contains(&dedup_tol) {
        return Err(Error::InvalidArgument(format!(
            "dedup_tol {dedup_tol:e} outside [1e-12, 1e-6]"
        )));
    }
    let symbols = group.symbols();
    let mut index = DedupIndex::new(dedup_tol);
    let mut entries = vec![OrbitEntry {
        word: Vec::new(),
        element: SU11Element::IDENTITY,
        point: Complex64::new(0.0, 0.0),
        radius: 0.0,
    }];
    index.insert(&SU11Element::IDENTITY, 0);
    let mut shells = vec![Some((0.0, 0.0))];
    let mut frontier = vec![0usize];
    for _len in 1..=max_word_length {
        let mut next = Vec::new();
        let mut shell: Option<(f64, f64)> = None;
        for &parent in &frontier {
            let last = entries[parent].word.last().copied();
            for (sym, s) in symbols.iter().enumerate() {
                let sym = sym as u8;
                if last.is_some_and(|l| l ^ 1 == sym) {
                    continue;
                }
                let element = entries[parent].element.compose(s).canonical();
                if index.find(&element, &entries).is_some() {
                    continue;
                }
                if entries.len() >= entry_cap {
                    return Err(Error::EntryCapExceeded(entry_cap));
                }
                let mut word = entries[parent].word.clone();
                word.push(sym);
                let point = element.orbit_point();
                let radius = point.norm();
                shell = Some(shell.map_or((radius, radius), |(lo, hi)| {
                    (lo.min(radius), hi.max(radius))
                }));
                index.insert(&element, entries.len());
                next.push(entries.len());
                entries.push(OrbitEntry {
                    word,
                    element,
                    point,
                    radius,
                });
            }
        }
        shells.push(shell);
        frontier = next;
    }
    let exhausted = symbols.is_empty() || frontier.is_empty();
    entries.sort_by(compare_entries);
    Ok(OrbitTable {
        entries,
        max_word_length,
        dedup_tol,
        shells,
        exhausted,
    })
}

fn compare_entries(x: &OrbitEntry, y: &OrbitEntry) -> Ordering {
    x.radius
        .total_cmp(&y.radius)
        .then_with(|| x.word.len().cmp(&y.word.len()))
        .then_with(|| x.word.cmp(&y.word))
        .then_with(|| {
            let (a, b) = (&x.element, &y.element);
            [a.a().re, a.a().im, a.b().re, a.b().im]
                .iter()
                .zip([b.a().re, b.a().im, b.b().re, b.b().im].iter())
                .map(|(p, q)| p.total_cmp(q))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Hash grid over the four real matrix entries with cell size `4·tol`, so two
/// elements within `tol` land in the same or adjacent cells.
struct DedupIndex {
    tol: f64,
    cells: HashMap<[i64; 4], usize>,
}

impl DedupIndex {
    fn new(tol: f64) -> Self {
        DedupIndex {
            tol,
            cells: HashMap::new(),
        }
    }

    fn coords(&self, g: &SU11Element) -> [f64; 4] {
        let h = 4.0 * self.tol;
        [g.a().re / h, g.a().im / h, g.b().re / h, g.b().im / h]
    }

    fn insert(&mut self, g: &SU11Element, idx: usize) {
        let c = self.coords(g);
        self.cells.insert(c.map(|x| x.round() as i64), idx);
    }

    fn find(&self, g: &SU11Element, entries: &[OrbitEntry]) -> Option<usize> {
        let c = self.coords(g);
        let key = c.map(|x| x.round() as i64);
        // Only coordinates within a quarter cell of a boundary need a neighbour probe.
        let mut options: [&[i64]; 4] = [&[0]; 4];
        let both_lo: &[i64] = &[0, -1];
        let both_hi: &[i64] = &[0, 1];
        for (k, &x) in c.iter().enumerate() {
            let f = x - x.round();
            if f < -0.24 {
                options[k] = both_lo;
            } else if f > 0.24 {
                options[k] = both_hi;
            }
        }
        for &d0 in options[0] {
            for &d1 in options[1] {
                for &d2 in options[2] {
                    for &d3 in options[3] {
                        let probe = [key[0] + d0, key[1] + d1, key[2] + d2, key[3] + d3];
                        if let Some(&j) = self.cells.get(&probe) {
                            if entries[j].element.max_entry_diff(g) <= self.tol {
                                return Some(j);
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

impl OrbitTable {
    pub fn entries(&self) -> &[OrbitEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_word_length(&self) -> usize {
        self.max_word_length
    }

    pub fn dedup_tol(&self) -> f64 {
        self.dedup_tol
    }

    pub fn shell_radii(&self, len: usize) -> Option<(f64, f64)> {
        self.shells.get(len).copied().flatten()
    }

    /// Euclidean radius below which the table is believed complete: the
    /// smallest radius among the elements first reached at the last word
    /// length. Elements first reached at a longer word length have, in every
    /// table checked, radii no smaller than this. When the last shell is empty
    /// the group has been exhausted and the whole disk is covered.
    pub fn reliable_radius(&self) -> f64 {
        if self.exhausted {
            return 1.0;
        }
        if self.max_word_length == 0 {
            return 0.0;
        }
        match self.shell_radii(self.max_word_length) {
            Some((lo, _)) => lo,
            None => 1.0,
        }
    }

    /// The sub-table of entries with word length at most `depth`.
    pub fn truncated(&self, depth: usize) -> OrbitTable {
        let depth = depth.min(self.max_word_length);
        OrbitTable {
            entries: self
                .entries
                .iter()
                .filter(|e| e.word.len() <= depth)
                .cloned()
                .collect(),
            max_word_length: depth,
            dedup_tol: self.dedup_tol,
            shells: self.shells[..=depth].to_vec(),
            exhausted: self.exhausted && depth == self.max_word_length,
        }
    }

    /// The sub-table of entries with `|γ0| < radius`, keeping the shell
    /// bookkeeping of the parent.
    pub fn within_radius(&self, radius: f64) -> OrbitTable {
        let n = self.entries.partition_point(|e| e.radius < radius);
        OrbitTable {
            entries: self.entries[..n].to_vec(),
            max_word_length: self.max_word_length,
            dedup_tol: self.dedup_tol,
            shells: self.shells.clone(),
            exhausted: self.exhausted,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &SU11Element> {
        self.entries.iter().map(|e| &e.element)
    }
}

/// `n(s, 0)`: the number of orbit points `γ·0` with `|γ·0| < s`.
/// Moves `z` into the Dirichlet domain about 0 by repeatedly stepping to
/// `γ⁻¹z` for the orbit point `γ0` nearest to `z`. Returns `(z', g)` with
/// `g·z' = z`. A table of depth 1 suffices when the generators pair the sides.
pub fn reduce_point(table: &OrbitTable, z: Complex64) -> (Complex64, SU11Element) {
    let mut cur = z;
    let mut g = SU11Element::IDENTITY;
    for _ in 0..10_000 {
        let d0 = d_kernel(cur, Complex64::new(0.0, 0.0));
        let mut best: Option<(f64, &OrbitEntry)> = None;
        for e in &table.entries[1..] {
            let d = d_kernel(cur, e.point);
            if d > d0 + 1e-14 && best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, e));
            }
        }
        match best {
            Some((_, e)) => {
                cur = e.element.inverse().act(cur);
                g = g.compose(&e.element);
            }
            None => break,
        }
    }
    (cur, g)
}

pub fn counting_function(table: &OrbitTable, s: f64) -> Result<usize> {
    let reliable = table.reliable_radius();
    if s > reliable {
        return Err(Error::BeyondReliableRadius {
            requested: s,
            reliable,
        });
    }
    Ok(table.entries.partition_point(|e| e.radius < s))
}

/// `n(s, 0)(1 - s)` sampled at hyperbolic radii evenly spread over the upper
/// half of the reliable range, where the orbit count has left its
/// small-radius regime.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingTrend {
    /// `(s, n(s, 0)(1 - s))`.
    pub samples: Vec<(f64, f64)>,
    pub mean: f64,
}

pub fn counting_trend(table: &OrbitTable, samples: usize) -> Result<CountingTrend> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let top = 2.0 * table.reliable_radius().atanh();
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let rho = top * (0.5 + 0.5 * k as f64 / (samples - 1) as f64);
        let s = (rho / 2.0).tanh().min(table.reliable_radius());
        out.push((s, counting_function(table, s)? as f64 * (1.0 - s)));
    }
    let mean = out.iter().map(|p| p.1).sum::<f64>() / samples as f64;
    Ok(CountingTrend { samples: out, mean })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentProbe {
    pub r: f64,
    /// Entry `L` is `Σ_{|word| ≤ L} d(γ0, 0)^r`.
    pub partial_sums: Vec<f64>,
}

impl ExponentProbe {
    /// Relative change contributed by the last word-length shell.
    pub fn last_shell_change(&self) -> f64 {
        match self.partial_sums.as_slice() {
            [.., a, b] => (b - a).abs() / b.abs(),
            _ => 0.0,
        }
    }
}

pub fn exponent_probe(table: &OrbitTable, r_values: &[f64]) -> Vec<ExponentProbe> {
    r_values
        .iter()
        .map(|&r| {
            let mut by_len = vec![0.0; table.max_word_length + 1];
            for e in &table.entries {
                by_len[e.word.len()] += (1.0 - e.radius * e.radius).powf(r / 2.0);
            }
            let mut acc = 0.0;
            let partial_sums = by_len
                .iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect();
            ExponentProbe { r, partial_sums }
        })
        .collect()
}
