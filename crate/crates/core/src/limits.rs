//! The search budget shared by every enumerator.
//!
//! Each enumeration call counts the candidate assignments it tries and aborts
//! with [`Error::SearchLimit`] once the budget of the current thread is
//! exhausted. The default budget is [`DEFAULT_MAX_SEARCH`].

use std::cell::Cell;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_SEARCH: u64 = 1_000_000;

thread_local! {
    static MAX_SEARCH: Cell<u64> = const { Cell::new(DEFAULT_MAX_SEARCH) };
}

pub fn max_search() -> u64 {
    MAX_SEARCH.with(|m| m.get())
}

pub fn set_max_search(limit: u64) {
    MAX_SEARCH.with(|m| m.set(limit));
}

/// Runs `f` with a temporary budget, restoring the previous one afterwards.
pub fn with_max_search<T>(limit: u64, f: impl FnOnce() -> T) -> T {
    struct Restore(u64);
    impl Drop for Restore {
        fn drop(&mut self) {
            set_max_search(self.0);
        }
    }
    let _restore = Restore(max_search());
    set_max_search(limit);
    f()
}

#[derive(Debug)]
pub(crate) struct Budget {
    used: u64,
    limit: u64,
    context: &'static str,
}

impl Budget {
    pub(crate) fn new(context: &'static str) -> Self {
        Budget { used: 0, limit: max_search(), context }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::SearchLimit { limit: self.limit, context: self.context.to_string() })
        } else {
            Ok(())
        }
    }
}
