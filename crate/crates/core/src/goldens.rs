//! Reference data shipped with the crate. Lines starting with `#` in the
//! data files are descriptions and are skipped.

const SCALED_ROWS: &str = include_str!("../data/scaled_rows.txt");
const FLAT4_FINALS: &str = include_str!("../data/flat4_finals.txt");
const FLAT4_TREE: &str = include_str!("../data/flat4_tree.txt");
const FLAT4_SUITE_TREE: &str = include_str!("../data/flat4_suite_tree.txt");
const FLAT5_LEFT_TREE: &str = include_str!("../data/flat5_left_tree.txt");
const FLAT5_LEFT_PRUNED: &str = include_str!("../data/flat5_left_pruned.txt");

fn body(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn single(text: &'static str) -> &'static str {
    body(text).next().expect("golden file has a data line")
}

/// `(n, values from the smallest sumtroid up to K = 0)`.
pub fn scaled_row_halves() -> Vec<(u32, Vec<u64>)> {
    body(SCALED_ROWS)
        .map(|l| {
            let (n, vals) = l.split_once(':').expect("row line is `n: values`");
            let vals = vals
                .split_whitespace()
                .map(|v| v.parse().expect("integer value"))
                .collect();
            (n.trim().parse().expect("row size"), vals)
        })
        .collect()
}

pub fn scaled_row_half(n: u32) -> Option<Vec<u64>> {
    scaled_row_halves()
        .into_iter()
        .find(|(m, _)| *m == n)
        .map(|(_, v)| v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalRow {
    pub pattern: String,
    pub moves: Vec<String>,
    pub sumtroid: i64,
}

/// Finals of the flat clusteron of size four, drawn on rooms `-3..=6`.
pub fn flat4_finals() -> Vec<FinalRow> {
    body(FLAT4_FINALS)
        .map(|l| {
            let mut it = l.split_whitespace();
            let pattern = it.next().unwrap().to_string();
            let moves = it.next().unwrap().split(',').map(String::from).collect();
            let sumtroid = it.next().unwrap().parse().unwrap();
            FinalRow {
                pattern,
                moves,
                sumtroid,
            }
        })
        .collect()
}

/// Move tree of the flat clusteron of size four, pattern labels.
pub fn flat4_tree() -> &'static str {
    single(FLAT4_TREE)
}

/// The same tree, suite labels.
pub fn flat4_suite_tree() -> &'static str {
    single(FLAT4_SUITE_TREE)
}

/// Left half of the flat size-five move tree, sumtroid labels.
pub fn flat5_left_tree() -> &'static str {
    single(FLAT5_LEFT_TREE)
}

/// The left half with children of locked-in states removed.
pub fn flat5_left_pruned() -> &'static str {
    single(FLAT5_LEFT_PRUNED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goldens_parse() {
        assert_eq!(scaled_row_halves().len(), 7);
        assert_eq!(scaled_row_half(9).unwrap().len(), 29);
        assert_eq!(flat4_finals().len(), 5);
        assert!(flat4_tree().starts_with("[0001111000"));
        assert!(flat5_left_pruned().ends_with("]]]]"));
    }
}
