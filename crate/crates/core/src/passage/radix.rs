//! Monotone priority queue for nonnegative `f64` labels.
//!
//! The bit pattern of a nonnegative float is ordered like the float, so a
//! radix heap over `u64` keys applies. Keys pushed must not be smaller than
//! the last key popped, which Dijkstra guarantees.

pub(crate) struct RadixHeap {
    last: u64,
    len: usize,
    buckets: Vec<Vec<(u64, u32)>>,
}

#[inline]
fn bucket(last: u64, key: u64) -> usize {
    if key == last {
        0
    } else {
        64 - (key ^ last).leading_zeros() as usize
    }
}

impl RadixHeap {
    pub fn new() -> Self {
        RadixHeap { last: 0, len: 0, buckets: (0..65).map(|_| Vec::new()).collect() }
    }

    #[inline]
    pub fn push(&mut self, key: u64, value: u32) {
        debug_assert!(key >= self.last, "radix heap keys must be monotone");
        self.buckets[bucket(self.last, key)].push((key, value));
        self.len += 1;
    }

    /// Moves the smallest keys into bucket 0; false when empty.
    fn refill(&mut self) -> bool {
        if !self.buckets[0].is_empty() {
            return true;
        }
        if self.len == 0 {
            return false;
        }
        let i = (1..65).find(|&i| !self.buckets[i].is_empty()).expect("len > 0");
        let items = std::mem::take(&mut self.buckets[i]);
        self.last = items.iter().map(|&(k, _)| k).min().expect("nonempty");
        for (k, v) in &items {
            self.buckets[bucket(self.last, *k)].push((*k, *v));
        }
        // hand the allocation back for reuse
        let mut items = items;
        items.clear();
        if self.buckets[i].is_empty() {
            self.buckets[i] = items;
        }
        true
    }

    #[inline]
    pub fn peek(&mut self) -> Option<(u64, u32)> {
        if self.refill() {
            self.buckets[0].last().copied()
        } else {
            None
        }
    }

    #[inline]
    pub fn pop(&mut self) -> Option<(u64, u32)> {
        if self.refill() {
            self.len -= 1;
            self.buckets[0].pop()
        } else {
            None
        }
    }
}
