//! Random-waypoint mobility: pause, pick a uniform target, travel there in a
//! straight line at a uniform speed, repeat.

use rand::Rng;

use super::geometry::{Area, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaypointState {
    pub position: Point,
    pub target: Point,
    pub speed: f64,
    pub pause_remaining: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaypointParams {
    pub area: Area,
    pub v_max: f64,
    pub pause_max: f64,
}

fn uniform_point<R: Rng + ?Sized>(rng: &mut R, area: Area) -> Point {
    Point::new(
        rng.gen::<f64>() * area.width,
        rng.gen::<f64>() * area.height,
    )
}

/// Speed in `(0, v_max]`; zero when the network is static.
fn draw_speed<R: Rng + ?Sized>(rng: &mut R, v_max: f64) -> f64 {
    if v_max <= 0.0 {
        0.0
    } else {
        v_max * (1.0 - rng.gen::<f64>())
    }
}

fn draw_pause<R: Rng + ?Sized>(rng: &mut R, pause_max: f64) -> f64 {
    if pause_max <= 0.0 {
        0.0
    } else {
        rng.gen::<f64>() * pause_max
    }
}

impl WaypointState {
    /// Random start position with an initial pause, target and speed.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, params: &WaypointParams) -> Self {
        let position = uniform_point(rng, params.area);
        let pause_remaining = draw_pause(rng, params.pause_max);
        let target = uniform_point(rng, params.area);
        let speed = draw_speed(rng, params.v_max);
        Self {
            position,
            target,
            speed,
            pause_remaining,
        }
    }

    pub fn fixed(position: Point) -> Self {
        Self {
            position,
            target: position,
            speed: 0.0,
            pause_remaining: 0.0,
        }
    }
}

/// Advances a node by `dt` seconds.
pub fn step_waypoint<R: Rng + ?Sized>(
    state: WaypointState,
    dt: f64,
    rng: &mut R,
    params: &WaypointParams,
) -> WaypointState {
    let mut s = state;
    let mut remaining = dt;
    // Bounded so that a zero-length leg with zero pause cannot spin forever.
    for _ in 0..64 {
        if remaining <= 0.0 {
            break;
        }
        if s.pause_remaining > 0.0 {
            let used = s.pause_remaining.min(remaining);
            s.pause_remaining -= used;
            remaining -= used;
            continue;
        }
        if s.speed <= 0.0 {
            break;
        }
        let dist = s.position.distance(s.target);
        let reach = s.speed * remaining;
        if reach < dist {
            let f = reach / dist;
            s.position = Point::new(
                s.position.x + (s.target.x - s.position.x) * f,
                s.position.y + (s.target.y - s.position.y) * f,
            );
            break;
        }
        remaining -= dist / s.speed;
        s.position = s.target;
        s.pause_remaining = draw_pause(rng, params.pause_max);
        s.target = uniform_point(rng, params.area);
        s.speed = draw_speed(rng, params.v_max);
    }
    s
}
