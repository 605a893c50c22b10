//! Tile grids, slices, game configs and structure detection.
//!
//! A level is stored as a [`TileGrid`] and worked on as a [`SliceSequence`]:
//! columns left to right for side-scrollers and roguelikes, rows bottom to
//! top for vertical platformers, so "next slice" always points in the
//! direction of play.

mod config;
mod grid;
mod slice;
mod structure;

pub use config::{
    pad_level, BcKind, CompletenessRule, DepthPreset, DepthPresets, GameConfig, LeniencyFeature,
    Padding, StructureShape, TileDef, TileTag,
};
pub use grid::{parse_level, to_slices, TileGrid};
pub use slice::{concatenate, join_slices, Orientation, Slice, SliceSequence};
pub use structure::{find_broken_structures, is_unbroken, StructureViolation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("row {row} has {found} tiles, expected {expected}")]
    RaggedInput {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("tile {tile:?} on row {row} is not in the game alphabet")]
    UnknownTile { tile: char, row: usize },
    #[error("grid has {found} cells, expected {expected}")]
    CellCount { expected: usize, found: usize },
    #[error("cannot concatenate sequences with different orientations")]
    MixedOrientation,
    #[error("slice length {found} does not match {expected}")]
    MixedSliceLength { expected: usize, found: usize },
    #[error("invalid game config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use proptest::prelude::*;

    fn cols(slices: &[&str]) -> SliceSequence {
        SliceSequence::from_strs(Orientation::ColumnsLeftToRight, slices)
    }

    #[test]
    fn parse_small_grid() {
        let mario = games::mario();
        let g = parse_level("--\nXX\n", &mario).unwrap();
        assert_eq!((g.width(), g.height()), (2, 2));
        assert_eq!(g.get(0, 1), b'X');
    }

    #[test]
    fn parse_rejects_unknown_and_ragged() {
        let mario = games::mario();
        assert!(matches!(
            parse_level("-?\n-!\n", &mario),
            Err(LevelError::UnknownTile { tile: '!', row: 1 })
        ));
        assert!(matches!(
            parse_level("---\nXX\n", &mario),
            Err(LevelError::RaggedInput { row: 1, .. })
        ));
    }

    #[test]
    fn slicing_orientations() {
        let g = TileGrid::from_text("ab\ncd\nef\n").unwrap();
        let c = g.to_slices(Orientation::ColumnsLeftToRight);
        assert_eq!(c.len(), 2);
        assert_eq!(c.slices()[0].as_str(), "ace");
        let r = g.to_slices(Orientation::RowsBottomToTop);
        assert_eq!(r.len(), 3);
        assert_eq!(r.slices()[0].as_str(), "ef");
        assert_eq!(r.slices()[2].as_str(), "ab");
        assert_eq!(r.to_grid(), g);
        assert_eq!(c.to_grid(), g);
    }

    #[test]
    fn concatenate_lengths_and_identity() {
        let a = cols(&["--", "XX", "X-"]);
        let b = cols(&["-X", "--"]);
        let empty = SliceSequence::empty(Orientation::ColumnsLeftToRight);
        let ab = concatenate([&a, &b]).unwrap();
        assert_eq!(ab.len(), 5);
        assert_eq!(concatenate([&a, &empty, &b]).unwrap(), ab);
        let l = cols(&["ab", "cd"]);
        let alb = concatenate([&a, &l, &b]).unwrap();
        assert_eq!(&alb.slices()[3..5], l.slices());
    }

    #[test]
    fn concatenate_errors() {
        let a = cols(&["--"]);
        let r = SliceSequence::from_strs(Orientation::RowsBottomToTop, &["--"]);
        assert_eq!(concatenate([&a, &r]), Err(LevelError::MixedOrientation));
        let c = cols(&["---"]);
        assert!(matches!(
            concatenate([&a, &c]),
            Err(LevelError::MixedSliceLength { .. })
        ));
    }

    #[test]
    fn padding_wraps_level() {
        let mario = games::mario();
        let seg = SliceSequence::new(
            Orientation::ColumnsLeftToRight,
            vec![Slice::new("------------XX"); 25],
        )
        .unwrap();
        let padded = pad_level(&seg, &mario);
        assert_eq!(
            padded.len(),
            25 + mario.padding.start.len() + mario.padding.end.len()
        );
        assert_eq!(padded.len(), 31);
        let empty = SliceSequence::empty(Orientation::ColumnsLeftToRight);
        assert_eq!(pad_level(&empty, &mario).len(), 6);
    }

    fn mario_level(rows: &[&str]) -> SliceSequence {
        let text = rows.join("\n");
        parse_level(&text, &games::mario())
            .unwrap()
            .to_slices(Orientation::ColumnsLeftToRight)
    }

    #[test]
    fn complete_pipe_is_unbroken() {
        let seq = mario_level(&["--<>--", "--[]--", "XXXXXX"]);
        assert!(find_broken_structures(&seq, &games::mario()).is_empty());
    }

    #[test]
    fn half_pipe_is_flagged() {
        let seq = mario_level(&["---<", "---[", "XXXX"]);
        let v = find_broken_structures(&seq, &games::mario());
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].column, v[0].row), (3, 0));
        assert_eq!(v[0].first_slice, 3);
    }

    #[test]
    fn adjacent_complete_pipes_are_unbroken() {
        let seq = mario_level(&["<><>", "[][]", "XXXX"]);
        assert!(is_unbroken(&seq, &games::mario()));
        // right half of one pipe glued to the left half of another
        let seq = mario_level(&["><", "][", "XX"]);
        assert_eq!(find_broken_structures(&seq, &games::mario()).len(), 1);
    }

    #[test]
    fn pipe_body_without_cap_is_flagged() {
        let seq = mario_level(&["----", "-[]-", "XXXX"]);
        assert_eq!(find_broken_structures(&seq, &games::mario()).len(), 1);
    }

    #[test]
    fn icarus_door_rules() {
        let icarus = games::icarus();
        let whole = parse_level(
            "----------------\n---D------------\n---D------------\n################\n",
            &icarus,
        )
        .unwrap()
        .to_slices(Orientation::RowsBottomToTop);
        assert!(is_unbroken(&whole, &icarus));
        // keep the floor and the lower door tile only
        let cut = whole.with_slices(whole.slices()[..2].to_vec()).unwrap();
        let v = find_broken_structures(&cut, &icarus);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].first_slice, 1);
    }

    #[test]
    fn dungeon_block_rules() {
        let dg = games::dungeongrams();
        let text = "XXXXXX\n-LMMR-\n-LMMR-\n------\n------\n------\n------\nXXXXXX\n";
        let seq = parse_level(text, &dg).unwrap().to_slices(dg.orientation);
        assert!(is_unbroken(&seq, &dg));
        let cut = seq.with_slices(seq.slices()[..3].to_vec()).unwrap();
        assert_eq!(find_broken_structures(&cut, &dg).len(), 1);
    }

    #[test]
    fn structure_free_slices_are_unbroken() {
        let seq = mario_level(&["-?--", "----", "XX-X"]);
        assert!(is_unbroken(&seq, &games::mario()));
    }

    fn arb_grid() -> impl Strategy<Value = TileGrid> {
        (1usize..8, 1usize..8).prop_flat_map(|(w, h)| {
            proptest::collection::vec(prop::sample::select(b"-X?<>[]".to_vec()), w * h)
                .prop_map(move |cells| TileGrid::new(w, h, cells).unwrap())
        })
    }

    proptest! {
        #[test]
        fn slice_round_trip(grid in arb_grid()) {
            for o in [Orientation::ColumnsLeftToRight, Orientation::RowsBottomToTop] {
                let seq = grid.to_slices(o);
                prop_assert_eq!(seq.to_grid(), grid.clone());
                let text = grid.to_text();
                prop_assert_eq!(TileGrid::from_text(&text).unwrap().to_text(), text);
            }
        }

        #[test]
        fn concatenate_is_associative(a in arb_grid(), b in arb_grid(), c in arb_grid()) {
            let h = a.height();
            let fit = |g: &TileGrid| {
                let cells: Vec<u8> = (0..h).flat_map(|y| (0..g.width()).map(move |x| (x, y)))
                    .map(|(x, y)| g.get(x, y.min(g.height() - 1))).collect();
                TileGrid::new(g.width(), h, cells).unwrap().to_slices(Orientation::ColumnsLeftToRight)
            };
            let (a, b, c) = (fit(&a), fit(&b), fit(&c));
            let left = concatenate([&concatenate([&a, &b]).unwrap(), &c]).unwrap();
            let right = concatenate([&a, &concatenate([&b, &c]).unwrap()]).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
