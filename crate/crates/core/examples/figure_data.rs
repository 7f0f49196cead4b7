//! Writes the surface and curve panels as CSV and SVG into a directory.
//!
//!     cargo run --example figure_data -- /tmp/msc-figures

use std::path::PathBuf;

use udw_steering::output::{curves_svg, surface_svg, write_sweep_csv};
use udw_steering::sweep::{figure_data, Figure, FigureDefaults};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("msc-figures"));
    std::fs::create_dir_all(&dir)?;
    let defaults = FigureDefaults::default();
    for which in [Figure::Surface, Figure::Curves] {
        for panel in figure_data(which, &defaults).unwrap() {
            write_sweep_csv(&panel.rows, std::fs::File::create(dir.join(format!("{}.csv", panel.name)))?)?;
            let svg = match which {
                Figure::Surface => surface_svg(&panel),
                Figure::Curves => curves_svg(&panel),
            };
            std::fs::write(dir.join(format!("{}.svg", panel.name)), svg)?;
            println!("{}: {} ({} rows)", panel.name, panel.title, panel.rows.len());
        }
    }
    println!("written to {}", dir.display());
    Ok(())
}
