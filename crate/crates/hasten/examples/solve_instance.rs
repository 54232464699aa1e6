//! Brute-force solving: the built-in instance and a hand-written document.
//!
//! Run with `cargo run --example solve_instance`.

use hasten::problem::Ec3Instance;

fn report(label: &str, inst: &Ec3Instance) -> hasten::Result<()> {
    let outcome = inst.brute_force_solutions()?;
    println!("{label}: {} bits, {} clauses", inst.n_bits(), inst.clauses().len());
    println!("  minimal violated-clause count: {}", outcome.min_energy);
    for a in &outcome.minimizers {
        println!("  {a}");
    }
    println!(
        "  {}",
        if outcome.satisfiable() {
            "satisfiable"
        } else {
            "unsatisfiable"
        }
    );
    Ok(())
}

fn main() -> hasten::Result<()> {
    report("@paper", &Ec3Instance::load("@paper")?)?;

    // the same document format the CLI accepts from a file
    let doc = r#"{
        "n": 5,
        "clauses": [[1, 2, 3], [3, 4, 5], [1, 4, 5]]
    }"#;
    report("custom 5-bit", &Ec3Instance::parse_document(doc)?)?;

    // all four triples over 4 bits: with k ones set, the clause totals sum
    // to 3k, but four satisfied clauses would need the sum to be 4
    let doc = r#"{ "n": 4, "clauses": [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] }"#;
    report("all triples on 4 bits", &Ec3Instance::parse_document(doc)?)?;
    Ok(())
}
