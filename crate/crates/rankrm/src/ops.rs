//! Thread-local counter of base-field operations.
//!
//! Every arithmetic operation on a [`crate::kfield::FieldScalar`] bumps the
//! counter of the calling thread. Benchmarks wrap a computation in [`count`]
//! to read off how many operations in K it performed.

use std::cell::Cell;

thread_local! {
    static OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn tick() {
    OPS.with(|c| c.set(c.get().wrapping_add(1)));
}

/// Adds `n` operations to this thread's counter.
#[inline]
pub fn charge(n: u64) {
    OPS.with(|c| c.set(c.get().wrapping_add(n)));
}

/// Like [`count`], but leaves this thread's counter where it was. Used when
/// work may run on a pool thread and is charged to another thread.
pub fn isolated<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = current();
    let out = f();
    let after = current();
    OPS.with(|c| c.set(before));
    (out, after.wrapping_sub(before))
}

/// Current value of this thread's counter.
pub fn current() -> u64 {
    OPS.with(|c| c.get())
}

/// Runs `f` and returns its result together with the number of K-operations
/// it performed on this thread.
pub fn count<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = current();
    let out = f();
    (out, current().wrapping_sub(before))
}
