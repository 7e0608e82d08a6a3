//! Discrete-event engine: simulated clock and the time-ordered event queue.
//!
//! Time is integer microseconds so that event ordering never depends on
//! floating point rounding. Ties on the fire time dispatch in insertion
//! order (a monotone sequence number breaks them), which keeps full runs
//! replayable.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;
use core::fmt;

/// Simulated clock in microseconds. Starts at zero, never decreases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimClock {
    now_us: u64,
}

impl SimClock {
    pub fn new() -> Self {
        Self { now_us: 0 }
    }

    pub fn now(&self) -> u64 {
        self.now_us
    }

    pub fn now_ms(&self) -> f64 {
        self.now_us as f64 / 1000.0
    }

    fn advance_to(&mut self, t: u64) {
        debug_assert!(t >= self.now_us, "clock moved backwards");
        self.now_us = t;
    }
}

/// Returned by [`EventQueue::schedule`] when an event targets the past.
/// Signals a simulator bug, not a runtime condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedulingInPast {
    pub at: u64,
    pub now: u64,
}

impl fmt::Display for SchedulingInPast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event scheduled at t={}us but clock is at t={}us", self.at, self.now)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SchedulingInPast {}

/// Why an event loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// No events left.
    Idle,
    /// The next event would fire past the deadline; it stays undelivered.
    DeadlineExceeded,
}

struct Entry<E> {
    fire_at: u64,
    seq: u64,
    event: E,
}

impl<E> PartialEq for Entry<E> {
    fn eq(&self, other: &Self) -> bool {
        self.fire_at == other.fire_at && self.seq == other.seq
    }
}
impl<E> Eq for Entry<E> {}
impl<E> PartialOrd for Entry<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<E> Ord for Entry<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for earliest-first dispatch.
        (other.fire_at, other.seq).cmp(&(self.fire_at, self.seq))
    }
}

/// Priority queue of `(fire_time, sequence, event)` with FIFO tie-break.
pub struct EventQueue<E> {
    heap: BinaryHeap<Entry<E>>,
    next_seq: u64,
}

impl<E> Default for EventQueue<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> EventQueue<E> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            next_seq: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    /// Schedules `event` for dispatch at absolute time `at`.
    pub fn schedule(&mut self, clock: &SimClock, at: u64, event: E) -> Result<(), SchedulingInPast> {
        if at < clock.now() {
            return Err(SchedulingInPast { at, now: clock.now() });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry { fire_at: at, seq, event });
        Ok(())
    }

    /// Fire time of the next event, if any.
    pub fn peek_time(&self) -> Option<u64> {
        self.heap.peek().map(|e| e.fire_at)
    }

    /// Pops the next event and advances the clock to its fire time.
    pub fn pop(&mut self, clock: &mut SimClock) -> Option<E> {
        let entry = self.heap.pop()?;
        clock.advance_to(entry.fire_at);
        Some(entry.event)
    }

    /// Dispatches events in order through `handler` until the queue drains
    /// or the next event would fire past `deadline` (exclusive).
    ///
    /// The handler may schedule further events; `ControlFlow`-style early
    /// exit is signalled by returning `false`.
    pub fn run_until_idle<F>(&mut self, clock: &mut SimClock, deadline: u64, mut handler: F) -> StopReason
    where
        F: FnMut(&mut Self, &mut SimClock, E) -> bool,
    {
        loop {
            match self.peek_time() {
                None => return StopReason::Idle,
                Some(t) if t > deadline => return StopReason::DeadlineExceeded,
                Some(_) => {
                    let ev = self.pop(clock).expect("peeked entry vanished");
                    if !handler(self, clock, ev) {
                        return StopReason::Idle;
                    }
                }
            }
        }
    }
}
