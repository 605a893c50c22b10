//! The three reference game configs shipped with the crate.

use crate::level::GameConfig;

pub const MARIO_JSON: &str = include_str!("../games/mario.json");
pub const ICARUS_JSON: &str = include_str!("../games/icarus.json");
pub const DUNGEONGRAMS_JSON: &str = include_str!("../games/dungeongrams.json");

pub const NAMES: [&str; 3] = ["mario", "icarus", "dungeongrams"];

pub fn mario() -> GameConfig {
    GameConfig::from_json(MARIO_JSON).expect("bundled mario config is valid")
}

pub fn icarus() -> GameConfig {
    GameConfig::from_json(ICARUS_JSON).expect("bundled icarus config is valid")
}

pub fn dungeongrams() -> GameConfig {
    GameConfig::from_json(DUNGEONGRAMS_JSON).expect("bundled dungeongrams config is valid")
}

/// Looks up a bundled config by name. `dg` is accepted for dungeongrams.
pub fn by_name(name: &str) -> Option<GameConfig> {
    match name.to_ascii_lowercase().as_str() {
        "mario" => Some(mario()),
        "icarus" => Some(icarus()),
        "dungeongrams" | "dg" => Some(dungeongrams()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_configs_load_and_round_trip() {
        for name in NAMES {
            let c = by_name(name).unwrap();
            assert_eq!(c.name, name);
            let again = GameConfig::from_json(&c.to_json()).unwrap();
            assert_eq!(again, c);
        }
    }

    #[test]
    fn orders_lengths_and_depths() {
        let (m, i, d) = (mario(), icarus(), dungeongrams());
        assert_eq!((m.ngram_order, m.segment_length, m.link_search_max_depth), (3, 25, 7));
        assert_eq!((i.ngram_order, i.segment_length, i.link_search_max_depth), (2, 25, 7));
        assert_eq!((d.ngram_order, d.segment_length, d.link_search_max_depth), (3, 15, 4));
        assert_eq!(m.depth_presets.classic, 6);
        assert_eq!(d.max_structure_extent(), 4);
        assert_eq!(m.max_structure_extent(), 2);
        assert_eq!(i.max_structure_extent(), 2);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(MARIO_JSON).unwrap();
        v["ngram_order"] = 1.into();
        assert!(GameConfig::from_json(&v.to_string()).is_err());

        let mut v: serde_json::Value = serde_json::from_str(MARIO_JSON).unwrap();
        v["padding"]["start"][0] = "------------Z!".into();
        assert!(GameConfig::from_json(&v.to_string()).is_err());

        let mut v: serde_json::Value = serde_json::from_str(DUNGEONGRAMS_JSON).unwrap();
        v["agent_params"]["food_gain"] = 50.into();
        assert!(GameConfig::from_json(&v.to_string()).is_err());

        let mut v: serde_json::Value = serde_json::from_str(ICARUS_JSON).unwrap();
        v["structure_shapes"][0]["member_tiles"] = serde_json::json!(["Z"]);
        assert!(GameConfig::from_json(&v.to_string()).is_err());
    }
}
