use rayon::prelude::*;

use crate::matrix::{DistanceField, Matrix};
use crate::scalar::{cmp_scalar, Scalar};

/// Reference to an entity whose ranking list is being read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entity {
    Probe(usize),
    Gallery(usize),
}

/// Rank of every gallery item in every entity's ranking list.
///
/// Ranks are 1-based. Both the rank lookup and the sorted order are kept,
/// so the top-k neighbours of an entity are a slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    n_gallery: usize,
    n_probe: usize,
    probe_order: Vec<u32>,
    probe_rank: Vec<u32>,
    gallery_order: Vec<u32>,
    gallery_rank: Vec<u32>,
}

impl RankTable {
    pub fn gallery_count(&self) -> usize {
        self.n_gallery
    }

    pub fn probe_count(&self) -> usize {
        self.n_probe
    }

    fn row<'a>(&self, buf: &'a [u32], idx: usize) -> &'a [u32] {
        &buf[idx * self.n_gallery..(idx + 1) * self.n_gallery]
    }

    /// `R_entity(g_j)`, in `1..=N_g`.
    #[inline]
    pub fn rank(&self, entity: Entity, j: usize) -> usize {
        let (buf, i) = match entity {
            Entity::Probe(i) => (&self.probe_rank, i),
            Entity::Gallery(i) => (&self.gallery_rank, i),
        };
        buf[i * self.n_gallery + j] as usize
    }

    /// Full rank row of an entity, indexed by gallery id.
    pub fn ranks(&self, entity: Entity) -> &[u32] {
        match entity {
            Entity::Probe(i) => self.row(&self.probe_rank, i),
            Entity::Gallery(i) => self.row(&self.gallery_rank, i),
        }
    }

    /// Gallery ids in ascending distance order for an entity.
    pub fn order(&self, entity: Entity) -> &[u32] {
        match entity {
            Entity::Probe(i) => self.row(&self.probe_order, i),
            Entity::Gallery(i) => self.row(&self.gallery_order, i),
        }
    }

    /// The `k` nearest gallery ids (those with rank `<= k`).
    pub fn top(&self, entity: Entity, k: usize) -> &[u32] {
        let order = self.order(entity);
        &order[..k.min(order.len())]
    }
}

/// Gallery ids of one distance row, sorted ascending with ties broken by id.
pub fn argsort_row<T: Scalar>(row: &[T]) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..row.len() as u32).collect();
    idx.sort_unstable_by(|&a, &b| {
        cmp_scalar(row[a as usize], row[b as usize]).then(a.cmp(&b))
    });
    idx
}

fn fill(dist: &Matrix<impl Scalar>, order: &mut [u32], rank: &mut [u32], self_first: bool) {
    let n = dist.cols();
    if n == 0 {
        return;
    }
    order
        .par_chunks_mut(n)
        .zip(rank.par_chunks_mut(n))
        .enumerate()
        .for_each(|(i, (o, r))| {
            o.copy_from_slice(&argsort_row(dist.row(i)));
            if self_first {
                // duplicates of g_i at distance 0 with a smaller id would otherwise precede it
                let pos = o.iter().position(|&g| g as usize == i).expect("self in row");
                o[..=pos].rotate_right(1);
            }
            for (pos, &g) in o.iter().enumerate() {
                r[g as usize] = pos as u32 + 1;
            }
        });
}

/// Builds probe and gallery rank tables from a distance field.
///
/// Probe lists range over the gallery only. Ties are broken by ascending
/// gallery id, except that a gallery item always ranks first in its own
/// list even when duplicates sit at distance zero.
pub fn build_rank_tables<T: Scalar>(dist: &DistanceField<T>) -> RankTable {
    let n_g = dist.gallery_count();
    let n_p = dist.probe_count();
    let mut table = RankTable {
        n_gallery: n_g,
        n_probe: n_p,
        probe_order: vec![0; n_p * n_g],
        probe_rank: vec![0; n_p * n_g],
        gallery_order: vec![0; n_g * n_g],
        gallery_rank: vec![0; n_g * n_g],
    };
    fill(&dist.query_gallery, &mut table.probe_order, &mut table.probe_rank, false);
    fill(
        &dist.gallery_gallery,
        &mut table.gallery_order,
        &mut table.gallery_rank,
        true,
    );
    table
}
