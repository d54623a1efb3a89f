//! Library half of the `goodint` binary: the machine-output record types,
//! kept importable so consumers and tests can round-trip them.

pub mod record;
