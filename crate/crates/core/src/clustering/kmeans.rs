use rand::Rng;

pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansRun {
    /// Cluster index per point.
    pub assignment: Vec<usize>,
    /// Within-cluster sum of squares after each centroid update.
    pub wcss: Vec<f64>,
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

/// k-means++ seeding from a given first centroid: each further centroid is
/// drawn with probability proportional to its squared distance from the
/// nearest centroid chosen so far.
fn seed(points: &[Vec<f64>], k: usize, first: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[first].clone()];
    let mut closest: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = closest.iter().sum();
        let mut r = rng.gen::<f64>() * total;
        let mut pick = closest.iter().rposition(|&d| d > 0.0).expect("k is capped at the distinct points");
        for (i, &d) in closest.iter().enumerate() {
            if r < d {
                pick = i;
                break;
            }
            r -= d;
        }
        let c = points[pick].clone();
        for (i, p) in points.iter().enumerate() {
            closest[i] = closest[i].min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn distinct_points(points: &[Vec<f64>], cap: usize) -> usize {
    let mut seen: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !seen.contains(&p) {
            seen.push(p);
            if seen.len() == cap {
                break;
            }
        }
    }
    seen.len()
}

fn update_centroids(points: &[Vec<f64>], assignment: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut sizes = vec![0usize; k];
    for (p, &j) in points.iter().zip(assignment) {
        sizes[j] += 1;
        for (s, x) in sums[j].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (s, n) in sums.iter_mut().zip(&sizes) {
        for x in s.iter_mut() {
            *x /= *n as f64;
        }
    }
    sums
}

/// Moves a point into every empty cluster: the one farthest from the empty
/// cluster's former centroid, taken from a cluster that can spare it.
fn fill_empty(points: &[Vec<f64>], assignment: &mut [usize], centroids: &[Vec<f64>]) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &j in assignment.iter() {
            sizes[j] += 1;
        }
        let Some(empty) = sizes.iter().position(|&n| n == 0) else { return };
        let mut pick = None;
        for (i, p) in points.iter().enumerate() {
            if sizes[assignment[i]] < 2 {
                continue;
            }
            let d = sq_dist(p, &centroids[empty]);
            if pick.is_none_or(|(_, best)| d > best) {
                pick = Some((i, d));
            }
        }
        match pick {
            Some((i, _)) => assignment[i] = empty,
            None => return,
        }
    }
}

/// Lloyd's algorithm on dense points with a random first centroid.
pub fn kmeans(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> KMeansRun {
    assert!(!points.is_empty(), "k-means needs at least one point");
    let first = rng.gen_range(0..points.len());
    kmeans_from(points, k, first, rng)
}

/// Lloyd's algorithm with `points[first]` as the first centroid. `k` is
/// capped at the number of distinct points.
pub fn kmeans_from(points: &[Vec<f64>], k: usize, first: usize, rng: &mut impl Rng) -> KMeansRun {
    assert!(first < points.len(), "first centroid out of range");
    let k = k.max(1).min(distinct_points(points, k));
    let mut centroids = seed(points, k, first, rng);
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    let mut wcss = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        fill_empty(points, &mut assignment, &centroids);
        centroids = update_centroids(points, &assignment, k);
        wcss.push(points.iter().zip(&assignment).map(|(p, &j)| sq_dist(p, &centroids[j])).sum());
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }
    KMeansRun { assignment, wcss, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separates_three_blobs() {
        let pts: Vec<Vec<f64>> = [(0.0, 0.0), (0.1, 0.0), (5.0, 5.0), (5.1, 5.0), (9.0, 0.0), (9.0, 0.2)]
            .iter()
            .map(|&(x, y)| vec![x, y])
            .collect();
        for s in 0..20 {
            let run = kmeans(&pts, 3, &mut ChaCha8Rng::seed_from_u64(s));
            let a = &run.assignment;
            assert!(a[0] == a[1] && a[2] == a[3] && a[4] == a[5]);
            assert!(a[0] != a[2] && a[2] != a[4] && a[0] != a[4]);
        }
    }

    #[test]
    fn duplicates_form_one_cluster() {
        let pts = vec![vec![1.0, 0.0]; 5];
        let run = kmeans(&pts, 3, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(run.assignment, vec![0; 5]);
        assert_eq!(run.wcss, vec![0.0]);
    }

    #[test]
    fn fewer_points_than_k() {
        let pts = vec![vec![1.0], vec![2.0]];
        let run = kmeans(&pts, 3, &mut ChaCha8Rng::seed_from_u64(1));
        assert_ne!(run.assignment[0], run.assignment[1]);
    }
}
