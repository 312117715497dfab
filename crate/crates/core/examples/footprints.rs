//! Synthetic 7-beam pattern and its -3 dB beam borders, written as
//! `borders.csv` to stdout.

use beamsim::pattern::{all_footprints, write_borders};
use beamsim::synth::{gaussian_pattern, PatternParams};

fn main() -> beamsim::Result<()> {
    let (pattern, beams) = gaussian_pattern(&PatternParams::default(), 1)?;
    let footprints = all_footprints(&pattern)?;
    eprintln!("{} beams, {} samples each", pattern.beam_count(), pattern.samples_per_beam());
    for (fp, beam) in footprints.iter().zip(&beams) {
        eprintln!(
            "beam {}: boresight ({:.2}, {:.2}), peak {:.2} dB, {} samples within 3 dB, {} border vertices",
            fp.beam_id,
            beam.center.lat(),
            beam.center.lon(),
            fp.peak_gain_db,
            fp.qualifying_samples,
            fp.border.len()
        );
    }
    write_borders(&footprints, std::io::stdout().lock())
}
