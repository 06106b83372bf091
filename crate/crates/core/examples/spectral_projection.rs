//! The fairness vector, the projected operator and its leading eigenpairs.

use fairdsg::spectral::{
    dominant_eigenpair, fairness_vector, second_eigenvalue, spectral_profile, EigenSettings, ProjectedOperator,
};
use fairdsg::{Color, Coloring, LabeledGraph};

fn main() -> fairdsg::Result<()> {
    // K4 with colors R R B B
    let g = LabeledGraph::from_unweighted(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;
    let c = Coloring::new(vec![Color::Red, Color::Red, Color::Blue, Color::Blue]);
    let settings = EigenSettings::default().with_seed(7);

    let f = fairness_vector(&c);
    println!("f = {:?}", f.entries());

    let profile = spectral_profile(&g, &settings)?;
    println!(
        "adjacency: lambda1 {:.6}, lambda2 {:.6}, lambda_n {:.6}, expander {}",
        profile.lambda1,
        profile.lambda2,
        profile.lambda_n,
        profile.is_expander()
    );

    let op = ProjectedOperator::new(&g, &c)?;
    let top = dominant_eigenpair(&op, &settings)?;
    let second = second_eigenvalue(&op, &top, &settings)?;
    println!("projected: hat1 {:.6} after {} iterations, hat2 {:.6}", top.value, top.iterations, second.value);
    println!("v1 = {:?}, f.v1 = {:.1e}", top.vector, f.dot(&top.vector));
    Ok(())
}
