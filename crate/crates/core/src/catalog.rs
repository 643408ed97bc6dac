//! The 1024 length-2 patterns, their classification by distribution and by
//! avoidance, and the numbered class ledger shipped in `data/classes.json`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::distribution::{DistributionTable, Scanner, Signature};
use crate::error::Error;
use crate::pattern::MeshPattern;

const BUILTIN_SEED: &str = include_str!("../data/classes.json");

/// Class groups whose avoidance sets coincide by the shading lemma.
pub const SHADING_COINCIDENCES: &[&[u32]] = &[&[5, 99], &[23, 58], &[29, 41, 88], &[30, 60], &[59, 82]];

/// Classes whose two proven blocks are only conjectured to be equidistributed.
pub const CONJECTURED_CLASSES: [u32; 3] = [54, 69, 71];

/// `12` and `21` with each of the 512 shadings, sorted by literal.
pub fn all_length2_patterns() -> Vec<MeshPattern> {
    let mut v: Vec<MeshPattern> =
        [true, false].into_iter().flat_map(|inc| (0..512u16).map(move |m| MeshPattern::from_mask9(inc, m))).collect();
    v.sort_by_cached_key(|p| p.to_string());
    v
}

/// One numbered class as transcribed: trivial cells (patterns listed together
/// in one table cell), proven blocks and the status letter of the status table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedClass {
    pub class_id: u32,
    pub status: String,
    #[serde(default)]
    pub sources: Vec<String>,
    pub representatives: Vec<String>,
    #[serde(default)]
    pub cells: Vec<Vec<String>>,
    pub proven_blocks: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Seed {
    pub classes: Vec<SeedClass>,
}

impl Seed {
    pub fn builtin() -> Seed {
        Seed::from_json(BUILTIN_SEED).expect("builtin seed is valid")
    }

    pub fn from_json(text: &str) -> Result<Seed, Error> {
        let classes: Vec<SeedClass> = serde_json::from_str(text).map_err(|e| Error::Seed(e.to_string()))?;
        Ok(Seed { classes })
    }

    pub fn class(&self, id: u32) -> Option<&SeedClass> {
        self.classes.iter().find(|c| c.class_id == id)
    }

    /// Expands every class to its orbit-closed members and proven blocks.
    /// Fails if classes overlap or do not cover all 1024 patterns.
    pub fn records(&self) -> Result<Vec<ClassRecord>, Error> {
        let mut owner: HashMap<MeshPattern, u32> = HashMap::new();
        let mut out = Vec::new();
        for c in &self.classes {
            let mut blocks = Vec::new();
            for block in &c.proven_blocks {
                let mut set = BTreeSet::new();
                for lit in block {
                    let p: MeshPattern = lit.parse().map_err(|e| Error::Seed(format!("class {}: {e}", c.class_id)))?;
                    set.extend(p.symmetry_orbit());
                }
                blocks.push(sorted(set));
            }
            let members = sorted(blocks.iter().flatten().cloned().collect());
            if members.len() != blocks.iter().map(Vec::len).sum::<usize>() {
                return Err(Error::Seed(format!("class {}: proven blocks overlap", c.class_id)));
            }
            for p in &members {
                if let Some(prev) = owner.insert(p.clone(), c.class_id) {
                    return Err(Error::Seed(format!("{p} is in classes {prev} and {}", c.class_id)));
                }
            }
            out.push(ClassRecord {
                class_id: c.class_id,
                status: c.status.clone(),
                sources: c.sources.clone(),
                conjectured: c.sources.iter().any(|s| s == "conjectured"),
                members,
                proven_blocks: blocks,
            });
        }
        if owner.len() != 1024 {
            return Err(Error::Seed(format!("classes cover {} of 1024 patterns", owner.len())));
        }
        Ok(out)
    }
}

fn sorted(set: BTreeSet<MeshPattern>) -> Vec<MeshPattern> {
    let mut v: Vec<_> = set.into_iter().collect();
    v.sort_by_cached_key(|p| p.to_string());
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub class_id: u32,
    /// Letter from the status table: `D` distribution known, `A` avoidance known, `?` open.
    pub status: String,
    pub sources: Vec<String>,
    pub conjectured: bool,
    pub members: Vec<MeshPattern>,
    pub proven_blocks: Vec<Vec<MeshPattern>>,
}

impl ClassRecord {
    pub fn representative(&self) -> &MeshPattern {
        &self.members[0]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SignatureClass {
    pub representative: String,
    pub digest: String,
    pub class_id: Option<u32>,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub depth: usize,
    pub distribution_classes: usize,
    pub avoidance_classes: usize,
    pub proven_blocks: Option<usize>,
    pub classes: Vec<SignatureClass>,
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProvenMergeReport {
    pub blocks: usize,
    /// Classes made of more than one proven block.
    pub splits: Vec<u32>,
    /// Proven blocks whose members do not share one signature.
    pub inhomogeneous: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WilfReport {
    pub depth: usize,
    /// Distinct avoidance sequences among all 1024 patterns.
    pub observed: usize,
    /// Avoidance classes when every observed coincidence counts as settled except
    /// the merges that rest only on the open conjectures.
    pub proven_merge: usize,
    /// Conjectured classes whose two blocks stay apart in `proven_merge`.
    pub pending: Vec<u32>,
    /// Components when merging only through proven blocks, the avoidance
    /// formula families of the formulas registry and the shading-lemma groups.
    pub formula_backed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoincidenceVerdict {
    pub classes: Vec<u32>,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureVerdict {
    pub class_id: u32,
    pub depth: usize,
    pub equal: bool,
    /// First `(n, k)` where the two blocks differ.
    pub first_difference: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumberingReport {
    /// class id -> representative literal of its signature class
    pub assigned: BTreeMap<u32, String>,
    pub unassigned: Vec<String>,
    pub collisions: Vec<(u32, u32)>,
    pub unknown_representatives: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AuditViolation {
    /// A cell's patterns do not all lie in one symmetry orbit.
    NotOneOrbit { class_id: u32, cell: usize },
    /// The cell misses patterns of its own orbit with the same underlying permutation.
    IncompleteCell { class_id: u32, cell: usize },
    /// Two patterns of one cell (or orbit) have different signatures.
    SignatureMismatch { class_id: u32, cell: usize, pattern: String },
}

/// All 1024 tables at one depth, indexed by pattern.
pub struct Catalog {
    depth: usize,
    tables: Vec<DistributionTable>,
    index: HashMap<MeshPattern, usize>,
}

impl Catalog {
    pub fn build(depth: usize) -> Result<Catalog, Error> {
        Catalog::build_with(&Scanner::default(), depth)
    }

    pub fn build_with(scanner: &Scanner, depth: usize) -> Result<Catalog, Error> {
        Ok(Catalog::from_tables(depth, scanner.bulk_length2(depth)?.tables()))
    }

    pub fn from_tables(depth: usize, tables: Vec<DistributionTable>) -> Catalog {
        let index = tables.iter().enumerate().map(|(i, t)| (t.pattern.clone(), i)).collect();
        Catalog { depth, tables, index }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tables(&self) -> &[DistributionTable] {
        &self.tables
    }

    pub fn table(&self, p: &MeshPattern) -> &DistributionTable {
        &self.tables[self.index[p]]
    }

    pub fn signature(&self, p: &MeshPattern) -> Signature {
        self.table(p).signature()
    }

    fn avoidance_key(&self, p: &MeshPattern) -> Vec<u64> {
        self.table(p).rows.iter().skip(1).map(|r| r[0]).collect()
    }

    /// Signature classes, each sorted, ordered by smallest member literal.
    fn partition(&self) -> Vec<Vec<&DistributionTable>> {
        let mut groups: BTreeMap<Signature, Vec<&DistributionTable>> = BTreeMap::new();
        for t in &self.tables {
            groups.entry(t.signature()).or_default().push(t);
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort_by_cached_key(|g| g[0].pattern.to_string());
        out
    }

    pub fn avoidance_classes(&self) -> usize {
        self.tables.iter().map(|t| self.avoidance_key(&t.pattern)).collect::<BTreeSet<_>>().len()
    }

    pub fn classify(&self) -> ClassificationReport {
        let classes: Vec<SignatureClass> = self
            .partition()
            .into_iter()
            .map(|g| SignatureClass {
                representative: g[0].pattern.to_string(),
                digest: g[0].signature().digest(),
                class_id: None,
                members: g.iter().map(|t| t.pattern.to_string()).collect(),
            })
            .collect();
        ClassificationReport {
            depth: self.depth,
            distribution_classes: classes.len(),
            avoidance_classes: self.avoidance_classes(),
            proven_blocks: None,
            classes,
            discrepancies: Vec::new(),
        }
    }

    /// [`Catalog::classify`] overlaid with the class numbering and proven blocks.
    pub fn classify_with_seed(&self, seed: &Seed) -> Result<ClassificationReport, Error> {
        let mut report = self.classify();
        let numbering = self.load_class_numbering(seed);
        let by_rep: HashMap<&str, u32> = numbering.assigned.iter().map(|(id, r)| (r.as_str(), *id)).collect();
        for c in &mut report.classes {
            c.class_id = by_rep.get(c.representative.as_str()).copied();
        }
        let merge = self.proven_merge_report(seed)?;
        report.proven_blocks = Some(merge.blocks);
        report.discrepancies.extend(merge.inhomogeneous.iter().map(|b| format!("proven block spans signatures: {b}")));
        report
            .discrepancies
            .extend(numbering.unassigned.iter().map(|r| format!("no class id for signature class of {r}")));
        report
            .discrepancies
            .extend(numbering.collisions.iter().map(|(a, b)| format!("classes {a} and {b} share a signature")));
        Ok(report)
    }

    pub fn proven_merge_report(&self, seed: &Seed) -> Result<ProvenMergeReport, Error> {
        let records = seed.records()?;
        let mut blocks = 0;
        let mut splits = Vec::new();
        let mut inhomogeneous = Vec::new();
        for r in &records {
            blocks += r.proven_blocks.len();
            if r.proven_blocks.len() > 1 {
                splits.push(r.class_id);
            }
            for b in &r.proven_blocks {
                let s = self.signature(&b[0]);
                if b.iter().any(|p| self.signature(p) != s) {
                    inhomogeneous.push(format!("class {} block {}", r.class_id, b[0]));
                }
            }
        }
        Ok(ProvenMergeReport { blocks, splits, inhomogeneous })
    }

    pub fn wilf_classify(&self, seed: &Seed) -> Result<WilfReport, Error> {
        let records = seed.records()?;
        let observed = self.avoidance_classes();
        let pending: Vec<u32> = records
            .iter()
            .filter(|r| r.conjectured && r.proven_blocks.len() == 2)
            .filter(|r| self.avoidance_key(&r.proven_blocks[0][0]) == self.avoidance_key(&r.proven_blocks[1][0]))
            .map(|r| r.class_id)
            .collect();

        // Formula-backed merging over proven blocks.
        let mut block_of: Vec<(u32, usize)> = Vec::new();
        for r in &records {
            for b in 0..r.proven_blocks.len() {
                block_of.push((r.class_id, b));
            }
        }
        let idx: HashMap<(u32, usize), usize> = block_of.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut uf = UnionFind::new(block_of.len());
        let link_classes = |a: u32, b: u32, uf: &mut UnionFind| {
            if let (Some(&x), Some(&y)) = (idx.get(&(a, 0)), idx.get(&(b, 0))) {
                uf.union(x, y);
            }
        };
        for r in records.iter().filter(|r| !r.conjectured) {
            for b in 1..r.proven_blocks.len() {
                uf.union(idx[&(r.class_id, 0)], idx[&(r.class_id, b)]);
            }
        }
        for family in crate::formulas::avoidance_families() {
            for w in family.windows(2) {
                link_classes(w[0], w[1], &mut uf);
            }
        }
        for group in SHADING_COINCIDENCES {
            for w in group.windows(2) {
                link_classes(w[0], w[1], &mut uf);
            }
        }
        let formula_backed = uf.components();

        Ok(WilfReport { depth: self.depth, observed, proven_merge: observed + pending.len(), pending, formula_backed })
    }

    pub fn verify_shading_coincidences(
        &self,
        seed: &Seed,
        groups: &[&[u32]],
    ) -> Result<Vec<CoincidenceVerdict>, Error> {
        let records = seed.records()?;
        let rec = |id: u32| records.iter().find(|r| r.class_id == id).ok_or(Error::Seed(format!("no class {id}")));
        groups
            .iter()
            .map(|g| {
                let mut keys = BTreeSet::new();
                for &id in g.iter() {
                    for p in &rec(id)?.members {
                        keys.insert(self.avoidance_key(p));
                    }
                }
                Ok(CoincidenceVerdict { classes: g.to_vec(), equal: keys.len() == 1 })
            })
            .collect()
    }

    pub fn load_class_numbering(&self, seed: &Seed) -> NumberingReport {
        let partition = self.partition();
        let mut class_of: HashMap<&MeshPattern, usize> = HashMap::new();
        for (i, g) in partition.iter().enumerate() {
            for t in g {
                class_of.insert(&t.pattern, i);
            }
        }
        let mut assigned = BTreeMap::new();
        let mut taken: HashMap<usize, u32> = HashMap::new();
        let mut collisions = Vec::new();
        let mut unknown = Vec::new();
        for c in &seed.classes {
            let Some(rep) = c.representatives.first() else { continue };
            let Some(i) = rep.parse::<MeshPattern>().ok().and_then(|p| class_of.get(&p).copied()) else {
                unknown.push(rep.clone());
                continue;
            };
            if let Some(&other) = taken.get(&i) {
                collisions.push((other, c.class_id));
                continue;
            }
            taken.insert(i, c.class_id);
            assigned.insert(c.class_id, partition[i][0].pattern.to_string());
        }
        let unassigned = (0..partition.len())
            .filter(|i| !taken.contains_key(i))
            .map(|i| partition[i][0].pattern.to_string())
            .collect();
        NumberingReport { assigned, unassigned, collisions, unknown_representatives: unknown }
    }

    /// Checks every transcribed cell: one symmetry orbit, complete, one signature.
    pub fn audit_trivial_cells(&self, seed: &Seed) -> Vec<AuditViolation> {
        let mut out = Vec::new();
        for c in &seed.classes {
            for (ci, cell) in c.cells.iter().enumerate() {
                let pats: Vec<MeshPattern> = cell.iter().filter_map(|l| l.parse().ok()).collect();
                let Some(first) = pats.first() else { continue };
                let orbit = first.symmetry_orbit();
                if pats.len() != cell.len() || pats.iter().any(|p| !orbit.contains(p)) {
                    out.push(AuditViolation::NotOneOrbit { class_id: c.class_id, cell: ci });
                }
                let same_tau = orbit.iter().filter(|q| q.tau() == first.tau()).count();
                if same_tau != cell.len() {
                    out.push(AuditViolation::IncompleteCell { class_id: c.class_id, cell: ci });
                }
                let s = self.signature(first);
                for q in pats.iter().chain(&orbit) {
                    if self.signature(q) != s {
                        out.push(AuditViolation::SignatureMismatch {
                            class_id: c.class_id,
                            cell: ci,
                            pattern: q.to_string(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Compares the two proven blocks of a conjectured class at every depth up to `depth`.
pub fn conjecture_check(seed: &Seed, class_id: u32, depth: usize) -> Result<ConjectureVerdict, Error> {
    conjecture_check_with(&Scanner::default(), seed, class_id, depth)
}

pub fn conjecture_check_with(
    scanner: &Scanner,
    seed: &Seed,
    class_id: u32,
    depth: usize,
) -> Result<ConjectureVerdict, Error> {
    let records = seed.records()?;
    let r =
        records.iter().find(|r| r.class_id == class_id).ok_or_else(|| Error::Seed(format!("no class {class_id}")))?;
    if r.proven_blocks.len() != 2 {
        return Err(Error::Seed(format!("class {class_id} has {} proven blocks, expected 2", r.proven_blocks.len())));
    }
    let a = scanner.distribution(&r.proven_blocks[0][0], depth)?;
    let b = scanner.distribution(&r.proven_blocks[1][0], depth)?;
    let first_difference =
        (0..=depth).find_map(|n| (0..a.rows[n].len()).find(|&k| a.rows[n][k] != b.rows[n][k]).map(|k| (n, k)));
    Ok(ConjectureVerdict { class_id, depth, equal: first_difference.is_none(), first_difference })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
