// SPDX-License-Identifier: Apache-2.0
//! Writes a G11-like random ±1 torus in G-set format to stdout.
//!
//! Usage: `cargo run -p ssqa-core --example write_torus [rows] [cols] [seed]`

use ssqa_core::gset::{toroidal_grid, write_gset};

fn main() {
    let arg = |i: usize, d: u64| {
        std::env::args()
            .nth(i)
            .and_then(|s| s.parse().ok())
            .unwrap_or(d)
    };
    let g =
        toroidal_grid(arg(1, 50) as usize, arg(2, 16) as usize, arg(3, 11)).expect("valid torus");
    print!("{}", write_gset(&g));
}
