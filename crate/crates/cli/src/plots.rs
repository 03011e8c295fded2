//! Gnuplot scripts for the sweep tables. Scripts are written next to the
//! CSVs and run from that directory (`gnuplot scalability.gp`); they lean
//! on the fixed row order the sweep writers emit (one row per
//! preconditioner per case, gdsw/as/none).

use std::path::{Path, PathBuf};

use anyhow::Result;

use crate::output;

/// Two-panel template over a three-preconditioner sweep table.
fn three_series(csv: &str, png: &str, xlabel: &str) -> String {
    format!(
        r#"set datafile separator comma
set terminal pngcairo size 1280,520
set output "{png}"
set multiplot layout 1,2
set xlabel "{xlabel}"
set key left top
set logscale y
set ylabel "condition number"
plot "{csv}" every 3::0 using 0:3:xtic(1) with linespoints lw 2 pt 7 title "two-level", \
     ""    every 3::1 using 0:3 with linespoints lw 2 pt 5 title "one-level", \
     ""    every 3::2 using 0:3 with linespoints lw 2 pt 9 title "unpreconditioned"
unset logscale y
set ylabel "iterations"
plot "{csv}" every 3::0 using 0:4:xtic(1) with linespoints lw 2 pt 7 title "two-level", \
     ""    every 3::1 using 0:4 with linespoints lw 2 pt 5 title "one-level", \
     ""    every 3::2 using 0:4 with linespoints lw 2 pt 9 title "unpreconditioned"
unset multiplot
"#
    )
}

/// Single-series template for the default heterogeneity table (two-level
/// solver only); rerun the sweep without --all-preconds if rows interleave.
fn one_series(csv: &str, png: &str) -> String {
    format!(
        r#"set datafile separator comma
set terminal pngcairo size 1280,520
set output "{png}"
set multiplot layout 1,2
set xtics rotate by -35
set xlabel "conductivity layout"
set key left top
set ylabel "condition number"
plot "{csv}" using 0:3:xtic(1) with linespoints lw 2 pt 7 title "two-level"
set ylabel "iterations"
plot "{csv}" using 0:4:xtic(1) with linespoints lw 2 pt 7 title "two-level"
unset multiplot
"#
    )
}

pub fn write_plot_scripts(dir: &Path) -> Result<Vec<PathBuf>> {
    let scripts = [
        (
            "scalability.gp",
            three_series("scalability.csv", "scalability.png", "cell grid"),
        ),
        (
            "optimality.gp",
            three_series("optimality.csv", "optimality.png", "subdomain/mesh size ratio"),
        ),
        ("tau.gp", three_series("tau.csv", "tau.png", "step size")),
        (
            "robustness.gp",
            one_series("robustness.csv", "robustness.png"),
        ),
    ];
    let mut written = Vec::new();
    for (name, text) in scripts {
        let path = dir.join(name);
        output::write_text_file(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scripts_cover_all_four_tables() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_plot_scripts(dir.path()).unwrap();
        assert_eq!(paths.len(), 4);
        let scal = std::fs::read_to_string(dir.path().join("scalability.gp")).unwrap();
        assert!(scal.contains("every 3::2"));
        assert!(scal.contains("\"scalability.csv\""));
        assert!(scal.contains("set logscale y"));
        let rob = std::fs::read_to_string(dir.path().join("robustness.gp")).unwrap();
        assert!(rob.contains("robustness.csv"));
        assert!(!rob.contains("every 3"));
    }
}
