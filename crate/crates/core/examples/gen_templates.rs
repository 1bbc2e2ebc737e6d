//! Regenerates `data/templates9.txt`:
//!
//!     cargo run -p bitchaos --example gen_templates -- 9 > crates/core/data/templates9.txt

use bitchaos::sts::templates::aperiodic_templates;

fn main() {
    let len = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(9);
    for t in aperiodic_templates(len) {
        println!("{}", t.label());
    }
}
