//! Wall-time benchmark crate. The interesting numbers live in the criterion
//! benches (`cargo bench -p fewnomial-bench`); field-operation scaling is
//! measured by the CLI's `bench` subcommand and the acceptance suite, which
//! count abstract operations instead of nanoseconds.
