use std::collections::BTreeMap;
use std::sync::Mutex;

/// Abstract operation count.
///
/// One unit is charged per neighbor-list entry touched, per element per sort
/// pass and per prefix-sum element. Charges are computed from structure sizes
/// on the calling thread, so totals do not depend on the thread count.
#[derive(Debug, Default)]
pub struct WorkCounter {
    phases: Mutex<BTreeMap<String, u64>>,
}

impl WorkCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&self, phase: &str, units: u64) {
        if units == 0 {
            return;
        }
        let mut map = self.phases.lock().unwrap();
        *map.entry(phase.to_string()).or_insert(0) += units;
    }

    pub fn total(&self) -> u64 {
        self.phases.lock().unwrap().values().sum()
    }

    pub fn per_phase(&self) -> BTreeMap<String, u64> {
        self.phases.lock().unwrap().clone()
    }

    pub fn reset(&self) {
        self.phases.lock().unwrap().clear();
    }
}
