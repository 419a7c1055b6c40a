//! Stereographic chart: projection, inverse and the chord identity.
use prte::geom::{chord_gap, jacobian_to_sphere, project, unproject, Dim, Direction, PlanePoint};

fn main() -> prte::error::Result<()> {
    let dim = Dim::THREE;
    let theta = Direction::new(dim, &[0.6, 0.0, -0.8])?;
    let v = project(&theta)?;
    println!("θ = {:?} ↦ v = {:?}", theta.components(), v.components());
    println!("J(v) = {:?}", unproject(&v).components());

    let w = PlanePoint::new(dim, &[-1.5, 2.0])?;
    let direct = 1.0 - unproject(&v).dot(&unproject(&w));
    println!("1 − J(v)·J(w) = {direct:.15}  chord form = {:.15}", chord_gap(&v, &w));
    println!("dθ/dv at w = {:.6}", jacobian_to_sphere(&w));

    // the north pole has no chart image
    let pole = Direction::new(dim, &[0.0, 0.0, 1.0])?;
    println!("project(north pole) = {:?}", project(&pole).err());
    Ok(())
}
