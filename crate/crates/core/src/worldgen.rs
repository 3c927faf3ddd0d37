//! Map generation, terrain semantics, spawn and NPC placement.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combat::NpcType;
use crate::geom::Pos;

pub const TEAMS: usize = 16;
pub const TEAM_SIZE: usize = 8;
pub const AGENTS: usize = TEAMS * TEAM_SIZE;

/// Depth (from the outer ring) of the band where teams spawn.
pub const SPAWN_DEPTH: i32 = 2;
const CLUSTER_SEPARATION: i32 = 8;
/// NPCs keep this far from the border so spawn clusters start uncontested.
const NPC_MIN_DEPTH: i32 = 4;
const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum WorldgenError {
    #[error("invalid map config: {0}")]
    InvalidConfig(String),
    #[error("{0:?} is not harvestable")]
    NotHarvestable(TerrainKind),
    #[error("only {found} spawnable tiles could be arranged into team clusters")]
    InsufficientSpawnableTiles { found: usize },
    #[error("map snapshot: {0}")]
    Snapshot(String),
}

/// The sixteen terrain kinds. Declaration order is the on-disk kind index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TerrainKind {
    Lava,
    Water,
    Grass,
    Scrub,
    Forest,
    Stone,
    Slag,
    Ore,
    Stump,
    Tree,
    Fragment,
    Crystal,
    Weeds,
    Herb,
    Ocean,
    Fish,
}

impl TerrainKind {
    pub const ALL: [TerrainKind; 16] = [
        TerrainKind::Lava,
        TerrainKind::Water,
        TerrainKind::Grass,
        TerrainKind::Scrub,
        TerrainKind::Forest,
        TerrainKind::Stone,
        TerrainKind::Slag,
        TerrainKind::Ore,
        TerrainKind::Stump,
        TerrainKind::Tree,
        TerrainKind::Fragment,
        TerrainKind::Crystal,
        TerrainKind::Weeds,
        TerrainKind::Herb,
        TerrainKind::Ocean,
        TerrainKind::Fish,
    ];

    /// Kinds a [`MapGenConfig`] may assign a ratio to. Grass fills the remainder.
    pub const GENERATABLE: [TerrainKind; 9] = [
        TerrainKind::Lava,
        TerrainKind::Water,
        TerrainKind::Forest,
        TerrainKind::Stone,
        TerrainKind::Ore,
        TerrainKind::Tree,
        TerrainKind::Crystal,
        TerrainKind::Herb,
        TerrainKind::Fish,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Option<TerrainKind> {
        TerrainKind::ALL.get(i as usize).copied()
    }

    pub fn passable(self) -> bool {
        !matches!(
            self,
            TerrainKind::Lava
                | TerrainKind::Water
                | TerrainKind::Stone
                | TerrainKind::Ocean
                | TerrainKind::Fish
        )
    }

    pub fn harvestable(self) -> bool {
        matches!(
            self,
            TerrainKind::Water
                | TerrainKind::Forest
                | TerrainKind::Ore
                | TerrainKind::Tree
                | TerrainKind::Crystal
                | TerrainKind::Herb
                | TerrainKind::Fish
        )
    }

    /// The kind a degraded tile regrows into.
    pub fn regrows_to(self) -> Option<TerrainKind> {
        match self {
            TerrainKind::Scrub => Some(TerrainKind::Forest),
            TerrainKind::Slag => Some(TerrainKind::Ore),
            TerrainKind::Stump => Some(TerrainKind::Tree),
            TerrainKind::Fragment => Some(TerrainKind::Crystal),
            TerrainKind::Weeds => Some(TerrainKind::Herb),
            TerrainKind::Ocean => Some(TerrainKind::Fish),
            _ => None,
        }
    }

    pub fn is_degraded(self) -> bool {
        self.regrows_to().is_some()
    }
}

/// What a harvestable tile becomes once harvested. Water never degrades.
pub fn tile_transition(kind: TerrainKind) -> Result<TerrainKind, WorldgenError> {
    match kind {
        TerrainKind::Forest => Ok(TerrainKind::Scrub),
        TerrainKind::Ore => Ok(TerrainKind::Slag),
        TerrainKind::Tree => Ok(TerrainKind::Stump),
        TerrainKind::Crystal => Ok(TerrainKind::Fragment),
        TerrainKind::Herb => Ok(TerrainKind::Weeds),
        TerrainKind::Fish => Ok(TerrainKind::Ocean),
        TerrainKind::Water => Ok(TerrainKind::Water),
        other => Err(WorldgenError::NotHarvestable(other)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub kind: TerrainKind,
    /// Ticks until a degraded tile regrows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub respawn_timer: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameMap {
    pub size: i32,
    tiles: Vec<Tile>,
}

impl GameMap {
    /// A map filled with one kind. Mostly useful for hand-built test maps.
    pub fn filled(size: i32, kind: TerrainKind) -> Self {
        GameMap {
            size,
            tiles: vec![Tile { kind, respawn_timer: None }; (size * size) as usize],
        }
    }

    /// A grass map with an impassable lava border ring.
    pub fn bordered(size: i32) -> Self {
        let mut map = GameMap::filled(size, TerrainKind::Grass);
        for p in map.positions().collect::<Vec<_>>() {
            if map.depth(p) == 0 {
                map.set_kind(p, TerrainKind::Lava);
            }
        }
        map
    }

    pub fn in_bounds(&self, p: Pos) -> bool {
        p.row >= 0 && p.col >= 0 && p.row < self.size && p.col < self.size
    }

    fn idx(&self, p: Pos) -> usize {
        (p.row * self.size + p.col) as usize
    }

    pub fn tile(&self, p: Pos) -> &Tile {
        &self.tiles[self.idx(p)]
    }

    pub fn kind(&self, p: Pos) -> TerrainKind {
        self.tile(p).kind
    }

    /// Out-of-bounds positions read as impassable.
    pub fn passable(&self, p: Pos) -> bool {
        self.in_bounds(p) && self.kind(p).passable()
    }

    pub fn set_kind(&mut self, p: Pos, kind: TerrainKind) {
        let i = self.idx(p);
        self.tiles[i] = Tile { kind, respawn_timer: None };
    }

    /// Harvest the tile at `p`, degrading it and arming its regrowth timer.
    pub fn degrade(&mut self, p: Pos, respawn_ticks: u32) -> Result<TerrainKind, WorldgenError> {
        let i = self.idx(p);
        let next = tile_transition(self.tiles[i].kind)?;
        if next != self.tiles[i].kind {
            self.tiles[i] = Tile { kind: next, respawn_timer: Some(respawn_ticks) };
        }
        Ok(next)
    }

    /// Advance regrowth timers by one tick. Returns the tiles that regrew.
    pub fn tick_respawns(&mut self) -> Vec<Pos> {
        let mut regrown = Vec::new();
        let size = self.size;
        for (i, tile) in self.tiles.iter_mut().enumerate() {
            if let Some(t) = tile.respawn_timer {
                if t <= 1 {
                    tile.kind = tile.kind.regrows_to().unwrap_or(tile.kind);
                    tile.respawn_timer = None;
                    regrown.push(Pos::new(i as i32 / size, i as i32 % size));
                } else {
                    tile.respawn_timer = Some(t - 1);
                }
            }
        }
        regrown
    }

    /// Distance from the outer ring (0 on the border).
    pub fn depth(&self, p: Pos) -> i32 {
        p.row.min(p.col).min(self.size - 1 - p.row).min(self.size - 1 - p.col)
    }

    pub fn center(&self) -> Pos {
        Pos::new(self.size / 2, self.size / 2)
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        let s = self.size;
        (0..s).flat_map(move |r| (0..s).map(move |c| Pos::new(r, c)))
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn histogram(&self) -> BTreeMap<TerrainKind, usize> {
        let mut h = BTreeMap::new();
        for t in &self.tiles {
            *h.entry(t.kind).or_insert(0) += 1;
        }
        h
    }

    /// JSON snapshot with run-length encoded kind indices.
    pub fn to_snapshot(&self, seed: u64) -> MapSnapshot {
        let mut runs: Vec<[u32; 2]> = Vec::new();
        for t in &self.tiles {
            let k = t.kind.index() as u32;
            match runs.last_mut() {
                Some(run) if run[0] == k => run[1] += 1,
                _ => runs.push([k, 1]),
            }
        }
        MapSnapshot { version: SNAPSHOT_VERSION, size: self.size, seed, tiles: runs }
    }

    pub fn from_snapshot(snap: &MapSnapshot) -> Result<GameMap, WorldgenError> {
        if snap.version != SNAPSHOT_VERSION {
            return Err(WorldgenError::Snapshot(format!("unsupported version {}", snap.version)));
        }
        let mut tiles = Vec::with_capacity((snap.size * snap.size) as usize);
        for &[k, n] in &snap.tiles {
            let kind = TerrainKind::from_index(k as u8)
                .filter(|_| k < 16)
                .ok_or_else(|| WorldgenError::Snapshot(format!("bad kind index {k}")))?;
            tiles.extend(std::iter::repeat(Tile { kind, respawn_timer: None }).take(n as usize));
        }
        if tiles.len() != (snap.size * snap.size) as usize {
            return Err(WorldgenError::Snapshot(format!(
                "run lengths cover {} tiles, expected {}",
                tiles.len(),
                snap.size * snap.size
            )));
        }
        Ok(GameMap { size: snap.size, tiles })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSnapshot {
    pub version: u32,
    pub size: i32,
    pub seed: u64,
    /// `[kind index, run length]` pairs in row-major order.
    pub tiles: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapGenConfig {
    pub size: i32,
    /// Fraction of interior tiles per generatable kind; Grass takes the rest.
    pub terrain_ratios: BTreeMap<TerrainKind, f64>,
    pub npc_count: usize,
    pub seed: u64,
}

impl Default for MapGenConfig {
    fn default() -> Self {
        use TerrainKind::*;
        let terrain_ratios = [
            (Forest, 0.12),
            (Water, 0.06),
            (Stone, 0.05),
            (Ore, 0.03),
            (Tree, 0.03),
            (Crystal, 0.03),
            (Herb, 0.03),
            (Fish, 0.04),
            (Lava, 0.01),
        ]
        .into_iter()
        .collect();
        MapGenConfig { size: 128, terrain_ratios, npc_count: 192, seed: 0 }
    }
}

impl MapGenConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn ratio(&self, kind: TerrainKind) -> f64 {
        self.terrain_ratios.get(&kind).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<(), WorldgenError> {
        if self.size < 32 || self.size % 2 != 0 {
            return Err(WorldgenError::InvalidConfig(format!(
                "size must be even and at least 32, got {}",
                self.size
            )));
        }
        let mut total = 0.0;
        for (&kind, &r) in &self.terrain_ratios {
            if !r.is_finite() || r < 0.0 {
                return Err(WorldgenError::InvalidConfig(format!("ratio for {kind:?} is {r}")));
            }
            if kind == TerrainKind::Grass {
                continue;
            }
            if !TerrainKind::GENERATABLE.contains(&kind) {
                return Err(WorldgenError::InvalidConfig(format!("{kind:?} cannot be generated")));
            }
            total += r;
        }
        if total > 1.0 + 1e-9 {
            return Err(WorldgenError::InvalidConfig(format!("ratios sum to {total} > 1")));
        }
        Ok(())
    }
}

/// Generate a map. The result depends only on `cfg`.
pub fn generate_map(cfg: &MapGenConfig) -> Result<GameMap, WorldgenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d61_7067_656e);
    let mut map = GameMap::bordered(cfg.size);
    let interior = ((cfg.size - 2) * (cfg.size - 2)) as f64;
    let target = |kind: TerrainKind| -> usize {
        let r = cfg.ratio(kind);
        if r > 0.0 {
            ((r * interior).round() as usize).max(1)
        } else {
            0
        }
    };

    // Impassable kinds stay out of the spawn band; passable ones may sit anywhere.
    use TerrainKind::*;
    let plan: [(TerrainKind, usize, usize); 8] = [
        (Water, 12, 40),
        (Stone, 4, 16),
        (Forest, 6, 24),
        (Ore, 1, 4),
        (Tree, 1, 4),
        (Crystal, 1, 4),
        (Herb, 1, 4),
        (Lava, 1, 1),
    ];
    for (kind, min_blob, max_blob) in plan {
        place_blobs(&mut map, &mut rng, kind, target(kind), min_blob, max_blob);
    }
    place_fish(&mut map, &mut rng, target(Fish));
    Ok(map)
}

fn allowed_depth(kind: TerrainKind) -> i32 {
    if kind.passable() {
        1
    } else {
        SPAWN_DEPTH + 1
    }
}

fn random_interior(map: &GameMap, rng: &mut ChaCha8Rng, min_depth: i32) -> Pos {
    let lo = min_depth;
    let hi = map.size - min_depth;
    Pos::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

/// Grow random blobs of `kind` over Grass until `count` tiles are placed.
fn place_blobs(
    map: &mut GameMap,
    rng: &mut ChaCha8Rng,
    kind: TerrainKind,
    count: usize,
    min_blob: usize,
    max_blob: usize,
) {
    let min_depth = allowed_depth(kind);
    let mut placed = 0;
    let mut attempts = 0;
    while placed < count && attempts < count * 20 + 100 {
        attempts += 1;
        let seed = random_interior(map, rng, min_depth);
        if map.kind(seed) != TerrainKind::Grass {
            continue;
        }
        let blob = rng.gen_range(min_blob..=max_blob).min(count - placed);
        let mut frontier = vec![seed];
        let mut grown = 0;
        while grown < blob && !frontier.is_empty() {
            let i = rng.gen_range(0..frontier.len());
            let p = frontier.swap_remove(i);
            if map.depth(p) < min_depth || map.kind(p) != TerrainKind::Grass {
                continue;
            }
            map.set_kind(p, kind);
            grown += 1;
            frontier.extend(p.neighbours4());
        }
        placed += grown;
    }
}

/// Fish replaces Grass tiles orthogonally adjacent to Water.
fn place_fish(map: &mut GameMap, rng: &mut ChaCha8Rng, count: usize) {
    if count == 0 {
        return;
    }
    let min_depth = allowed_depth(TerrainKind::Fish);
    let mut shore: Vec<Pos> = map
        .positions()
        .filter(|&p| {
            map.depth(p) >= min_depth
                && map.kind(p) == TerrainKind::Grass
                && p.neighbours4().iter().any(|&q| map.in_bounds(q) && map.kind(q) == TerrainKind::Water)
        })
        .collect();
    shore.shuffle(rng);
    let mut placed = 0;
    for p in shore {
        if placed == count {
            break;
        }
        // Keep a walkable neighbour so the fish can be reached.
        let reachable = p.neighbours4().iter().any(|&q| map.passable(q));
        if reachable {
            map.set_kind(p, TerrainKind::Fish);
            placed += 1;
        }
    }
    // Maps without water still get fish, ringed by grass.
    while placed < count {
        let p = random_interior(map, rng, min_depth);
        if map.kind(p) == TerrainKind::Grass {
            map.set_kind(p, TerrainKind::Fish);
            placed += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpawnPlan {
    /// `team_slots[team]` holds that team's eight spawn tiles.
    pub team_slots: Vec<Vec<Pos>>,
}

/// Walk order of the tiles at depth 1, clockwise from the north-west corner.
fn ring_order(size: i32) -> Vec<Pos> {
    let lo = 1;
    let hi = size - 2;
    let mut ring = Vec::new();
    for c in lo..hi {
        ring.push(Pos::new(lo, c));
    }
    for r in lo..hi {
        ring.push(Pos::new(r, hi));
    }
    for c in (lo + 1..=hi).rev() {
        ring.push(Pos::new(hi, c));
    }
    for r in (lo + 1..=hi).rev() {
        ring.push(Pos::new(r, lo));
    }
    ring
}

/// Sixteen clusters of eight spawn tiles around the map edge.
///
/// The ring is cut into sixteen equal arcs, four per side. Each cluster takes
/// the passable band tiles nearest its arc midpoint. Which team lands in which
/// arc is a seeded permutation.
pub fn spawn_positions(seed: u64, map: &GameMap) -> Result<SpawnPlan, WorldgenError> {
    let ring = ring_order(map.size);
    let arc = ring.len() / TEAMS;
    let mut clusters: Vec<Vec<Pos>> = Vec::with_capacity(TEAMS);
    let mut found = 0;
    for a in 0..TEAMS {
        let mid = ring[a * arc + arc / 2];
        let mut candidates: Vec<Pos> = (-(arc as i32) / 2..=(arc as i32) / 2)
            .flat_map(|dr| (-(arc as i32) / 2..=(arc as i32) / 2).map(move |dc| (dr, dc)))
            .map(|(dr, dc)| Pos::new(mid.row + dr, mid.col + dc))
            .filter(|&p| {
                map.in_bounds(p)
                    && (1..=SPAWN_DEPTH).contains(&map.depth(p))
                    && map.passable(p)
                    && p.chebyshev(mid) <= (arc as i32) / 2 - CLUSTER_SEPARATION / 2
            })
            .collect();
        candidates.sort_by_key(|&p| (p.manhattan(mid), p));
        candidates.truncate(TEAM_SIZE);
        found += candidates.len();
        clusters.push(candidates);
    }
    if clusters.iter().any(|c| c.len() < TEAM_SIZE) {
        return Err(WorldgenError::InsufficientSpawnableTiles { found });
    }
    for i in 0..TEAMS {
        for j in i + 1..TEAMS {
            let sep = clusters[i]
                .iter()
                .flat_map(|&p| clusters[j].iter().map(move |&q| p.chebyshev(q)))
                .min()
                .unwrap_or(i32::MAX);
            if sep < CLUSTER_SEPARATION {
                return Err(WorldgenError::InsufficientSpawnableTiles { found });
            }
        }
    }
    let mut order: Vec<usize> = (0..TEAMS).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x7370_6177_6e));
    Ok(SpawnPlan { team_slots: order.into_iter().map(|a| clusters[a].clone()).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpcSpawn {
    pub pos: Pos,
    pub npc_type: NpcType,
    pub level: u8,
}

/// Level 10 at the center falling to 1 on the border ring.
pub fn npc_level(map_size: i32, pos: Pos) -> u8 {
    let d_max = map_size / 2;
    let d = pos.chebyshev(Pos::new(map_size / 2, map_size / 2)).min(d_max);
    (1 + 9 * (d_max - d) / d_max).clamp(1, 10) as u8
}

/// Scatter `count` NPCs with radial distance drawn uniformly between the
/// spawn band and the center, so levels are spread evenly.
pub fn npc_placement(seed: u64, map: &GameMap, count: usize) -> Vec<NpcSpawn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e70_6373);
    let center = map.center();
    let d_max = map.size / 2 - NPC_MIN_DEPTH;
    let mut taken = vec![false; (map.size * map.size) as usize];
    let mut out = Vec::with_capacity(count);
    let available = map
        .positions()
        .filter(|&p| map.passable(p) && map.depth(p) >= NPC_MIN_DEPTH)
        .count();
    let count = count.min(available);
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let d = rng.gen_range(0..=d_max);
        let p = if d == 0 {
            center
        } else {
            // Uniform point on the square ring at distance d.
            let k = rng.gen_range(0..8 * d);
            let side = k / (2 * d);
            let off = k % (2 * d);
            match side {
                0 => Pos::new(center.row - d, center.col - d + off),
                1 => Pos::new(center.row - d + off, center.col + d),
                2 => Pos::new(center.row + d, center.col + d - off),
                _ => Pos::new(center.row + d - off, center.col - d),
            }
        };
        if !map.passable(p) || map.depth(p) < NPC_MIN_DEPTH {
            continue;
        }
        let i = (p.row * map.size + p.col) as usize;
        if taken[i] {
            continue;
        }
        taken[i] = true;
        out.push(p);
    }
    // Sparse maps: fill the rest from a scan.
    if out.len() < count {
        let mut rest: Vec<Pos> = map
            .positions()
            .filter(|&p| {
                map.passable(p) && map.depth(p) >= NPC_MIN_DEPTH && !taken[(p.row * map.size + p.col) as usize]
            })
            .collect();
        rest.shuffle(&mut rng);
        out.extend(rest.into_iter().take(count - out.len()));
    }
    out.into_iter()
        .enumerate()
        .map(|(i, pos)| NpcSpawn { pos, npc_type: NpcType::ALL[i % 3], level: npc_level(map.size, pos) })
        .collect()
}
