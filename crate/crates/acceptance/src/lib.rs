//! Acceptance criteria for `detrec`; the checks live in `tests/acceptance.rs`.
