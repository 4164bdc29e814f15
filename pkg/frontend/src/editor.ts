/**
 * Editing surface: turns tool interactions into validated edit operations
 * for the server, which owns the invariants and either applies the edit or
 * answers with the violated invariant.
 */

import type { ClientMessage, Frame, Role } from './protocol.js';
import type { Tool } from './state.js';

export interface Placement {
  x: number;
  y: number;
}

export function addCircleOp(at: Placement, radius = 0.25, fixated = false): ClientMessage {
  return {
    type: 'edit',
    op: {
      op: 'add_entity',
      kind: 'circle',
      spec: { radius, position: [at.x, at.y], fixated },
    },
  };
}

export function addPolygonOp(at: Placement, halfW = 0.3, halfH = 0.25, fixated = false): ClientMessage {
  return {
    type: 'edit',
    op: {
      op: 'add_entity',
      kind: 'polygon',
      spec: {
        vertices: [
          [-halfW, -halfH],
          [halfW, -halfH],
          [halfW, halfH],
          [-halfW, halfH],
        ],
        position: [at.x, at.y],
        fixated,
      },
    },
  };
}

export function addJointOp(bodyA: number, bodyB: number, anchorA: Placement, anchorB: Placement): ClientMessage {
  return {
    type: 'edit',
    op: {
      op: 'add_entity',
      kind: 'joint',
      spec: {
        body_a: bodyA,
        body_b: bodyB,
        anchor_a: [anchorA.x, anchorA.y],
        anchor_b: [anchorB.x, anchorB.y],
        motor_on: true,
        motor_power: 1.0,
        motor_speed: 2.0,
      },
    },
  };
}

export function addThrusterOp(body: number, anchor: Placement, angle: number): ClientMessage {
  return {
    type: 'edit',
    op: {
      op: 'add_entity',
      kind: 'thruster',
      spec: { body: body, anchor: [anchor.x, anchor.y], rotation: angle, power: 5.0 },
    },
  };
}

export function setRoleOp(slot: number, role: Role): ClientMessage {
  return { type: 'edit', op: { op: 'set_role', slot, role } };
}

export function moveOp(slot: number, to: Placement): ClientMessage {
  return { type: 'edit', op: { op: 'move', slot, position: [to.x, to.y] } };
}

export function deleteOp(kind: 'body' | 'joint' | 'thruster', slot: number): ClientMessage {
  return { type: 'edit', op: { op: 'delete_entity', kind, slot } };
}

/** Body slot under a world-space point in the given frame, topmost first. */
export function pickBody(frame: Frame, x: number, y: number): number | null {
  for (let i = frame.bodies.length - 1; i >= 0; i -= 1) {
    const body = frame.bodies[i];
    if (body.kind === 'circle') {
      const dx = x - body.position[0];
      const dy = y - body.position[1];
      if (dx * dx + dy * dy <= (body.radius ?? 0) ** 2) return body.slot;
    } else if (body.vertices) {
      const c = Math.cos(body.rotation);
      const s = Math.sin(body.rotation);
      const world = body.vertices.map(([lx, ly]) => [
        body.position[0] + c * lx - s * ly,
        body.position[1] + s * lx + c * ly,
      ]);
      let inside = true;
      for (let k = 0; k < world.length; k += 1) {
        const [x1, y1] = world[k];
        const [x2, y2] = world[(k + 1) % world.length];
        if ((x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) < 0) {
          inside = false;
          break;
        }
      }
      if (inside) return body.slot;
    }
  }
  return null;
}

/** The edit op a tool produces for a click, if any. */
export function toolToOp(tool: Tool, frame: Frame | null, at: Placement): ClientMessage | null {
  switch (tool) {
    case 'add_circle':
      return addCircleOp(at);
    case 'add_polygon':
      return addPolygonOp(at);
    case 'add_thruster': {
      const slot = frame ? pickBody(frame, at.x, at.y) : null;
      return slot === null ? null : addThrusterOp(slot, { x: 0, y: 0 }, 0);
    }
    case 'role_brush': {
      const slot = frame ? pickBody(frame, at.x, at.y) : null;
      return slot === null ? null : setRoleOp(slot, 'green');
    }
    default:
      return null;
  }
}
