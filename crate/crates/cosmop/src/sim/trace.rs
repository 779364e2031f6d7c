//! Trace output for simulated legs: a per-cycle CSV log and an SVG plot of
//! the executed path through the workspace.

use std::io::{self, Write};

use crate::scene::SceneDescription;

use super::dwa::CycleRow;

/// Writes one line per control cycle. `min_dist` and `phi_ps` describe the
/// state after the cycle; infinite distances (no obstacles) print as `inf`.
pub fn write_csv<W: Write>(mut out: W, rows: &[CycleRow]) -> io::Result<()> {
    writeln!(out, "t,x,y,heading,v,w,min_dist,phi_ps")?;
    for r in rows {
        writeln!(
            out,
            "{:.3},{:.1},{:.1},{:.4},{:.1},{:.4},{},{}",
            r.t,
            r.x,
            r.y,
            r.heading,
            r.v,
            r.w,
            if r.min_dist.is_finite() {
                format!("{:.1}", r.min_dist)
            } else {
                "inf".to_string()
            },
            r.phi_ps
        )?;
    }
    Ok(())
}

/// Plots the executed path over the workspace: border, wall segments, the
/// robot polyline with start/goal markers, and one polyline per obstacle.
/// Scene y grows upward, SVG y grows downward, so y is flipped.
pub fn write_svg<W: Write>(
    mut out: W,
    scene: &SceneDescription,
    rows: &[CycleRow],
    goal: (f64, f64),
) -> io::Result<()> {
    let w = scene.workspace.rect();
    let margin = (scene.workspace.l as f64) * 0.05;
    let side = scene.workspace.l as f64 + 2.0 * margin;
    let x0 = w.x_min as f64 - margin;
    let y_top = w.y_max as f64 + margin;
    // Flip: scene (x, y) -> svg (x - x0, y_top - y).
    let sx = |x: f64| x - x0;
    let sy = |y: f64| y_top - y;

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {side:.0} {side:.0}">"#
    )?;
    writeln!(
        out,
        r#"  <rect x="{:.0}" y="{:.0}" width="{}" height="{}" fill="white" stroke="black" stroke-width="8"/>"#,
        sx(w.x_min as f64),
        sy(w.y_max as f64),
        w.x_max - w.x_min,
        w.y_max - w.y_min
    )?;
    for o in &scene.obstacles {
        let r = o.rect();
        writeln!(
            out,
            r#"  <rect x="{:.0}" y="{:.0}" width="{}" height="{}" fill="dimgray"/>"#,
            sx(r.x_min as f64),
            sy(r.y_max as f64),
            (r.x_max - r.x_min).max(8),
            (r.y_max - r.y_min).max(8)
        )?;
    }

    let polyline = |pts: &[(f64, f64)]| {
        pts.iter()
            .map(|(x, y)| format!("{:.1},{:.1}", sx(*x), sy(*y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let robot: Vec<(f64, f64)> = rows.iter().map(|r| (r.x, r.y)).collect();
    if !robot.is_empty() {
        writeln!(
            out,
            r#"  <polyline points="{}" fill="none" stroke="royalblue" stroke-width="12"/>"#,
            polyline(&robot)
        )?;
        writeln!(
            out,
            r#"  <circle cx="{:.1}" cy="{:.1}" r="30" fill="royalblue"/>"#,
            sx(robot[0].0),
            sy(robot[0].1)
        )?;
    }
    writeln!(
        out,
        r#"  <circle cx="{:.1}" cy="{:.1}" r="30" fill="none" stroke="seagreen" stroke-width="12"/>"#,
        sx(goal.0),
        sy(goal.1)
    )?;

    let n_obstacles = rows.first().map_or(0, |r| r.obstacle_xy.len());
    for i in 0..n_obstacles {
        let path: Vec<(f64, f64)> = rows.iter().map(|r| r.obstacle_xy[i]).collect();
        writeln!(
            out,
            r#"  <polyline points="{}" fill="none" stroke="crimson" stroke-width="8" stroke-dasharray="20 14"/>"#,
            polyline(&path)
        )?;
        if let Some((x, y)) = path.last() {
            writeln!(
                out,
                r#"  <circle cx="{:.1}" cy="{:.1}" r="24" fill="crimson"/>"#,
                sx(*x),
                sy(*y)
            )?;
        }
    }
    writeln!(out, "</svg>")
}
