use serde::{Deserialize, Serialize};

use super::classify::OvoidClass;

/// Classes grouped by stabilizer order and orbit-length profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub stabilizer_order: u64,
    pub count: usize,
    pub point_orbit_lengths: Vec<(usize, usize)>,
    pub line_orbit_lengths: Vec<(usize, usize)>,
}

/// Rows sorted by stabilizer order descending, then by profile.
pub fn class_table(classes: &[OvoidClass]) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = Vec::new();
    for c in classes {
        match rows.iter_mut().find(|r| {
            r.stabilizer_order == c.stabilizer_order
                && r.point_orbit_lengths == c.point_orbit_lengths
                && r.line_orbit_lengths == c.line_orbit_lengths
        }) {
            Some(r) => r.count += 1,
            None => rows.push(TableRow {
                stabilizer_order: c.stabilizer_order,
                count: 1,
                point_orbit_lengths: c.point_orbit_lengths.clone(),
                line_orbit_lengths: c.line_orbit_lengths.clone(),
            }),
        }
    }
    rows.sort_by(|a, b| {
        b.stabilizer_order
            .cmp(&a.stabilizer_order)
            .then_with(|| b.point_orbit_lengths.cmp(&a.point_orbit_lengths))
            .then_with(|| b.line_orbit_lengths.cmp(&a.line_orbit_lengths))
    });
    rows
}

/// `42^1 21^1 14^2`.
pub fn format_lengths(lengths: &[(usize, usize)]) -> String {
    lengths
        .iter()
        .map(|(l, m)| format!("{l}^{m}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses the output of [`format_lengths`].
pub fn parse_lengths(text: &str) -> Option<Vec<(usize, usize)>> {
    text.split_whitespace()
        .map(|t| {
            let (l, m) = t.split_once('^')?;
            Some((l.parse().ok()?, m.parse().ok()?))
        })
        .collect()
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = String::from("stabilizer  number  point orbits  |  line orbits\n");
    for r in rows {
        out.push_str(&format!(
            "{:>10}  {:>6}  {}  |  {}\n",
            r.stabilizer_order,
            r.count,
            format_lengths(&r.point_orbit_lengths),
            format_lengths(&r.line_orbit_lengths)
        ));
    }
    out
}

/// Sum of `|G| / |stabilizer|` over classes, where `|G|` counts the kernel.
/// Equals the number of ovoids when the records are consistent.
pub fn orbit_sum_from_stabilizers(group_order: u128, classes: &[OvoidClass]) -> Option<u128> {
    classes.iter().try_fold(0u128, |acc, c| {
        let s = c.stabilizer_order as u128;
        (s != 0 && group_order.is_multiple_of(s)).then(|| acc + group_order / s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(stab: u64, pts: Vec<(usize, usize)>) -> OvoidClass {
        OvoidClass {
            representative: vec![],
            orbit_size: 1,
            stabilizer_order: stab,
            point_orbit_lengths: pts,
            line_orbit_lengths: vec![(1, 1)],
        }
    }

    #[test]
    fn groups_and_sorts() {
        let rows = class_table(&[
            class(3, vec![(1, 5)]),
            class(6, vec![(2, 3)]),
            class(3, vec![(1, 5)]),
        ]);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].stabilizer_order, 6);
        assert_eq!(rows[1].count, 2);
    }

    #[test]
    fn lengths_round_trip() {
        let l = vec![(42, 1), (21, 1), (14, 2), (7, 2)];
        assert_eq!(format_lengths(&l), "42^1 21^1 14^2 7^2");
        assert_eq!(parse_lengths("42^1 21^1 14^2 7^2"), Some(l));
        assert_eq!(parse_lengths("4^x"), None);
    }

    #[test]
    fn stabilizer_sum() {
        assert_eq!(
            orbit_sum_from_stabilizers(12, &[class(3, vec![]), class(6, vec![])]),
            Some(6)
        );
        assert_eq!(orbit_sum_from_stabilizers(12, &[class(5, vec![])]), None);
    }
}
