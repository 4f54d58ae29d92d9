//! Runs the built-in numerical checks and prints their summary.

use tokenlab::report::verification_table;
use tokenlab::verify::{run_verification, Fault, VerifyOptions};

fn main() {
    let report = run_verification(VerifyOptions::default());
    print!("{}", verification_table(&report));

    // A corrupted formula has to be caught.
    let broken = run_verification(VerifyOptions {
        fault: Some(Fault::DropCondition),
        ..Default::default()
    });
    println!(
        "\nwith an injected fault all checks pass: {}",
        broken.all_passed()
    );
}
