//! Classify the parity pair at every supported level and print the
//! verdicts: no level of either hierarchy separates even-length from
//! odd-length words.

use strata_core::automata::{Alphabet, Dfa};
use strata_core::decide::{membership, separation, Level};
use strata_core::Budget;

fn main() -> strata_core::Result<()> {
    let alphabet = Alphabet::new("a".chars())?;
    let even = Dfa::from_pattern("(aa)*", &alphabet)?;
    let odd = Dfa::from_pattern("a(aa)*", &alphabet)?;
    let budget = Budget::default();

    for level in Level::ALL {
        let verdict = separation(&even, &odd, level, &budget)?;
        println!("separation  {level:>8}: {:?}", verdict.answer);
    }

    let membership_verdict = membership(&even, Level::St1, &budget)?;
    println!("membership  {:>8}: {:?}", "st1", membership_verdict.answer);
    if let Some(bad) = &membership_verdict.bad_value {
        println!("bad value: {:?}", bad.labels);
    }
    Ok(())
}
