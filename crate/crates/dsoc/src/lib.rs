//! Link engineering for deep-space optical communication.
//!
//! This crate models an end-to-end photon-starved optical downlink: transmit
//! and receive aperture gains, free-space and atmospheric losses, background
//! and dark-count noise, photon-counting detector impairments (dead-time
//! blocking and timing jitter), and the soft capacity of the resulting
//! PPM/Poisson channel. On top of the channel model it provides design
//! tooling — optimal modulation order, code-rate selection, required-power
//! solving, and an exhaustive parameter search — plus a Monte Carlo oracle
//! that validates the analytic formulas by direct simulation, and a
//! Laguerre-Gaussian beam propagation module for orbital-angular-momentum
//! link studies.
//!
//! All internal computation is in SI base units (watts, meters, seconds);
//! decibels appear only at input/output boundaries.
//!
//! The `book/` directory of the repository contains a guide that walks
//! through each subsystem; its code snippets compile and run as doc-tests
//! of this crate (see the `booktests` module below).

pub mod capacity;
pub mod designer;
pub mod detector;
pub mod link_budget;
pub mod montecarlo;
pub mod noise;
pub mod oam;
pub mod ppm;
pub mod quantities;
pub mod scenario;

// Keep the guide's code snippets honest: every fenced Rust block in the book
// compiles and runs under `cargo test --doc`.
#[cfg(doctest)]
mod booktests {
    macro_rules! book_chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    book_chapter!(ch_introduction, "../../../book/src/introduction.md");
    book_chapter!(ch_quantities, "../../../book/src/quantities.md");
    book_chapter!(ch_link_budget, "../../../book/src/link-budget.md");
    book_chapter!(ch_noise_detection, "../../../book/src/noise-and-detection.md");
    book_chapter!(ch_ppm_poisson, "../../../book/src/ppm-poisson-channel.md");
    book_chapter!(ch_capacity, "../../../book/src/capacity.md");
    book_chapter!(ch_link_design, "../../../book/src/link-design.md");
    book_chapter!(ch_oam, "../../../book/src/oam-beams.md");
    book_chapter!(ch_monte_carlo, "../../../book/src/monte-carlo.md");
    book_chapter!(ch_cli, "../../../book/src/cli.md");
}
