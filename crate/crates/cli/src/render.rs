//! Aligned ASCII rendering of coefficient grids.

use dickson_core::gf::FieldCtx;
use dickson_core::identities::CoeffGrid;

pub fn render_grid(grid: &CoeffGrid, ctx: &FieldCtx) -> String {
    let rows = grid.rows();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.map(|f| ctx.render(f)).unwrap_or_default())
                .collect()
        })
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|s| s.len())
        .max()
        .unwrap_or(1)
        .max(1);
    let mut out = String::new();
    out.push_str(&format!("# {}\n", grid.source));
    for row in &cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn grid_csv(grid: &CoeffGrid, ctx: &FieldCtx) -> String {
    let mut out = String::new();
    for row in grid.rows() {
        let line: Vec<String> = row
            .iter()
            .map(|c| c.map(|f| ctx.render(f)).unwrap_or_default())
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
