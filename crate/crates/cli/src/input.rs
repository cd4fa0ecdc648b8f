use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use kontsevich_core::series::SeriesJson;
use kontsevich_core::{GraphSeries, PoissonStructure, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Format, PoissonArgs, Preset};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Reads a series in either the line format or JSON, judged by the first character.
pub fn read_series(path: &Path, sinks: usize) -> Result<GraphSeries> {
    let text = read(path)?;
    let series = if text.trim_start().starts_with('{') {
        let json: SeriesJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        GraphSeries::from_json(&json)
    } else {
        GraphSeries::parse_text(&text, Some(sinks))
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    if series.sink_count() != sinks {
        bail!("{}: expected a {sinks}-sink series, found {} sinks", path.display(), series.sink_count());
    }
    Ok(series)
}

pub fn render_series(series: &GraphSeries, format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => series.to_string(),
        Format::Json => serde_json::to_string_pretty(&series.to_json())? + "\n",
    })
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// The bivector named on the command line, with a display name.
pub fn load_poisson(args: &PoissonArgs) -> Result<Option<(String, PoissonStructure)>> {
    let loaded = match (&args.poisson, args.preset) {
        (Some(path), _) => {
            let p =
                PoissonStructure::parse_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            Some((path.display().to_string(), p))
        }
        (None, Some(Preset::So3)) => Some(("so(3)".to_string(), PoissonStructure::so3())),
        (None, Some(Preset::Witness)) => Some(("witness".to_string(), PoissonStructure::non_poisson_witness())),
        (None, None) => None,
    };
    if let (Some((_, p)), Some(dim)) = (&loaded, args.dim) {
        if p.dim() != dim {
            bail!("--dim {dim} does not match the Poisson structure of dimension {}", p.dim());
        }
    }
    Ok(loaded)
}

/// `--arg` polynomials, or seeded random ones (degree ≤ 3, coefficients in −3..3).
pub fn arguments(args: &PoissonArgs, dim: usize, count: usize) -> Result<Vec<Poly>> {
    if args.args.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        return Ok((0..count).map(|_| Poly::random(&mut rng, dim, 3, 3)).collect());
    }
    if args.args.len() != count {
        bail!("expected {count} --arg polynomials, got {}", args.args.len());
    }
    args.args.iter().map(|s| Poly::parse(s, dim).with_context(|| format!("parsing argument '{s}'"))).collect()
}
