//! Compiles every code block of the guide (`book/src/*.md`) as a doc-test,
//! so `cargo test` keeps the book in sync with the library. One module per
//! chapter makes a failing snippet easy to trace back to its page.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/signals-and-spectra.md")]
pub mod signals_and_spectra {}

#[doc = include_str!("../../../book/src/harmonic-wavelet-packets.md")]
pub mod harmonic_wavelet_packets {}

#[doc = include_str!("../../../book/src/extracting-the-fiv-band.md")]
pub mod extracting_the_fiv_band {}

#[doc = include_str!("../../../book/src/wear-stages.md")]
pub mod wear_stages {}

#[doc = include_str!("../../../book/src/lubrication-regimes.md")]
pub mod lubrication_regimes {}

#[doc = include_str!("../../../book/src/synthetic-data.md")]
pub mod synthetic_data {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
