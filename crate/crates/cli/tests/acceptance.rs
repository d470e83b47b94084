//! Runs the full validation sweep as a test, printing the per-criterion
//! report so failures are attributable.

#[test]
fn validation_sweep_passes() {
    let suite = localent::acceptance::run_all();
    print!("{}", suite.render());
    assert!(suite.all_passed(), "validation sweep failed:\n{}", suite.render());
}
