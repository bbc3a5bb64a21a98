//! Asymmetric-memory cost accounting.
//!
//! Reads of the large memory cost 1, writes cost `omega`. Local (symmetric)
//! memory is free to access but its footprint is tracked as a high-water
//! mark so that per-query local budgets can be checked.
//!
//! Only graph data is charged: adjacency words read through an
//! [`Adjacency`](crate::graph::Adjacency) implementation, and words committed
//! to output structures through [`AsymVec`]. Control state is not charged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_OMEGA: u64 = 16;

/// `ceil(sqrt(omega))`, floored at 2.
pub fn default_k(omega: u64) -> usize {
    let mut k = (omega as f64).sqrt() as u64;
    while k * k < omega {
        k += 1;
    }
    while k > 1 && (k - 1) * (k - 1) >= omega {
        k -= 1;
    }
    k.max(2) as usize
}

#[derive(Debug, Clone, Copy)]
struct ScopeFrame {
    base: u64,
    peak: u64,
}

#[derive(Debug, Clone)]
pub struct CostMeter {
    reads: u64,
    writes: u64,
    omega: u64,
    local_current: u64,
    local_hwm: u64,
    local_budget: Option<u64>,
    scopes: Vec<ScopeFrame>,
    last_scope_peak: u64,
}

impl Default for CostMeter {
    fn default() -> Self {
        Self::new(DEFAULT_OMEGA)
    }
}

impl CostMeter {
    pub fn new(omega: u64) -> Self {
        CostMeter {
            reads: 0,
            writes: 0,
            omega: omega.max(1),
            local_current: 0,
            local_hwm: 0,
            local_budget: None,
            scopes: Vec::new(),
            last_scope_peak: 0,
        }
    }

    pub fn with_local_budget(mut self, words: u64) -> Self {
        self.local_budget = Some(words);
        self
    }

    pub fn set_local_budget(&mut self, words: Option<u64>) {
        self.local_budget = words;
    }

    /// A fresh meter sharing this meter's `omega` and budget.
    pub fn fork(&self) -> Self {
        let mut m = CostMeter::new(self.omega);
        m.local_budget = self.local_budget;
        m
    }

    #[inline]
    pub fn record_read(&mut self, count: u64) {
        self.reads += count;
    }

    #[inline]
    pub fn record_write(&mut self, count: u64) {
        self.writes += count;
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }

    pub fn writes(&self) -> u64 {
        self.writes
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    /// `reads + omega * writes`.
    pub fn charged_cost(&self) -> u64 {
        self.reads + self.omega * self.writes
    }

    /// Largest local footprint seen over the meter's lifetime.
    pub fn local_hwm(&self) -> u64 {
        self.local_hwm
    }

    /// Peak footprint of the most recently closed top-level or nested scope.
    pub fn last_scope_peak(&self) -> u64 {
        self.last_scope_peak
    }

    #[inline]
    pub fn local_alloc(&mut self, words: u64) {
        self.local_current += words;
        if self.local_current > self.local_hwm {
            self.local_hwm = self.local_current;
        }
        if let Some(top) = self.scopes.last_mut() {
            let used = self.local_current - top.base;
            if used > top.peak {
                top.peak = used;
            }
        }
    }

    #[inline]
    pub fn local_free(&mut self, words: u64) {
        self.local_current = self.local_current.saturating_sub(words);
    }

    /// Runs `f` in a fresh local-memory scope. Words still allocated when `f`
    /// returns are released. Fails with [`Error::BudgetExceeded`] when the
    /// scope's peak exceeds the configured budget.
    pub fn local_scope<T>(&mut self, f: impl FnOnce(&mut CostMeter) -> T) -> Result<T> {
        let base = self.local_current;
        self.scopes.push(ScopeFrame { base, peak: 0 });
        let out = f(self);
        let frame = self.scopes.pop().expect("scope stack underflow");
        self.local_current = base;
        if let Some(parent) = self.scopes.last_mut() {
            let used = base - parent.base + frame.peak;
            if used > parent.peak {
                parent.peak = used;
            }
        }
        self.last_scope_peak = frame.peak;
        match self.local_budget {
            Some(budget) if frame.peak > budget => Err(Error::BudgetExceeded { peak: frame.peak }),
            _ => Ok(out),
        }
    }

    /// Adds another meter's counters into this one.
    pub fn merge(&mut self, other: &CostMeter) {
        self.reads += other.reads;
        self.writes += other.writes;
        self.local_hwm = self.local_hwm.max(other.local_hwm);
    }

    pub fn report(&self) -> CostReport {
        CostReport {
            reads: self.reads,
            writes: self.writes,
            omega: self.omega,
            charged: self.charged_cost(),
            local_hwm: self.local_hwm,
        }
    }
}

/// Flat JSON cost object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub reads: u64,
    pub writes: u64,
    pub omega: u64,
    pub charged: u64,
    pub local_hwm: u64,
}

impl CostReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cost report serializes")
    }
}

/// An array living in the large asymmetric memory. Every element store is
/// charged as one write and every load as one read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymVec<T> {
    data: Vec<T>,
}

impl<T: Copy> AsymVec<T> {
    pub fn new() -> Self {
        AsymVec { data: Vec::new() }
    }

    pub fn filled(len: usize, value: T, meter: &mut CostMeter) -> Self {
        meter.record_write(len as u64);
        AsymVec { data: vec![value; len] }
    }

    /// Fresh memory: allocation is free, only later stores are charged.
    pub fn alloc(len: usize, value: T) -> Self {
        AsymVec { data: vec![value; len] }
    }

    /// Wraps data that was already charged elsewhere (deserialization, tests).
    pub fn from_uncharged(data: Vec<T>) -> Self {
        AsymVec { data }
    }

    pub fn push(&mut self, value: T, meter: &mut CostMeter) {
        meter.record_write(1);
        self.data.push(value);
    }

    pub fn set(&mut self, i: usize, value: T, meter: &mut CostMeter) {
        meter.record_write(1);
        self.data[i] = value;
    }

    #[inline]
    pub fn get(&self, i: usize, meter: &mut CostMeter) -> T {
        meter.record_read(1);
        self.data[i]
    }

    /// Unmetered access, for serialization and test inspection.
    pub fn raw(&self) -> &[T] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

impl<T: Copy> Default for AsymVec<T> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charged_cost_examples() {
        let mut m = CostMeter::new(16);
        assert_eq!(m.charged_cost(), 0);
        m.record_write(1);
        assert_eq!(m.charged_cost(), 16);

        let mut m = CostMeter::new(10);
        m.record_read(5);
        m.record_write(2);
        assert_eq!(m.charged_cost(), 25);
    }

    #[test]
    fn scope_within_budget() {
        let mut m = CostMeter::new(16).with_local_budget(200);
        m.local_scope(|m| m.local_alloc(100)).unwrap();
        assert_eq!(m.last_scope_peak(), 100);
        assert_eq!(m.local_hwm(), 100);
    }

    #[test]
    fn scope_over_budget_reports_peak() {
        let mut m = CostMeter::new(16).with_local_budget(200);
        let err = m.local_scope(|m| m.local_alloc(300)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { peak: 300 });
    }

    #[test]
    fn nested_scopes() {
        // inner scope peaks at 50 and is released; outer then allocates 80
        let mut m = CostMeter::new(16);
        m.local_scope(|m| {
            m.local_scope(|m| m.local_alloc(50)).unwrap();
            assert_eq!(m.last_scope_peak(), 50);
            m.local_alloc(80);
        })
        .unwrap();
        assert_eq!(m.last_scope_peak(), 80);
    }

    #[test]
    fn inner_peak_counts_toward_outer() {
        let mut m = CostMeter::new(16);
        m.local_scope(|m| {
            m.local_alloc(10);
            m.local_scope(|m| m.local_alloc(50)).unwrap();
        })
        .unwrap();
        assert_eq!(m.last_scope_peak(), 60);
    }

    #[test]
    fn merge_is_additive() {
        let mut a = CostMeter::new(4);
        a.record_read(3);
        a.record_write(1);
        let mut b = CostMeter::new(4);
        b.record_read(2);
        b.record_write(5);
        a.merge(&b);
        assert_eq!((a.reads(), a.writes()), (5, 6));
        assert_eq!(a.charged_cost(), 5 + 4 * 6);
    }

    #[test]
    fn report_json_shape() {
        let mut m = CostMeter::new(16);
        m.record_read(7);
        m.record_write(2);
        let v: serde_json::Value = serde_json::from_str(&m.report().to_json()).unwrap();
        assert_eq!(v["reads"], 7);
        assert_eq!(v["writes"], 2);
        assert_eq!(v["omega"], 16);
        assert_eq!(v["charged"], 39);
        assert_eq!(v["local_hwm"], 0);
    }

    #[test]
    fn default_k_is_ceil_sqrt() {
        assert_eq!(default_k(16), 4);
        assert_eq!(default_k(17), 5);
        assert_eq!(default_k(64), 8);
        assert_eq!(default_k(1), 2);
    }

    #[test]
    fn asym_vec_charges() {
        let mut m = CostMeter::new(16);
        let mut v = AsymVec::new();
        v.push(3u32, &mut m);
        v.set(0, 4, &mut m);
        assert_eq!(v.get(0, &mut m), 4);
        assert_eq!((m.reads(), m.writes()), (1, 2));
    }
}
