/**
 * Canvas rendering of a streamed frame: arena, role-coloured shapes with
 * fixated darkening, joint/thruster markers, and the reward/done banner.
 *
 * Drawing goes through the Draw2D subset of CanvasRenderingContext2D so
 * tests can record the command stream without a real canvas.
 */

import type { Frame } from './protocol.js';

export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export const ARENA_SIZE = 5.0;
export const VIEW_MARGIN = 0.25;

const ROLE_FILL: Record<string, string> = {
  none: 'rgb(160,160,160)',
  green: 'rgb(60,190,70)',
  blue: 'rgb(60,110,235)',
  red: 'rgb(230,65,55)',
};
const FIXATED_FILL: Record<string, string> = {
  none: 'rgb(88,88,88)',
  green: 'rgb(33,104,38)',
  blue: 'rgb(33,60,129)',
  red: 'rgb(126,35,30)',
};
const BACKGROUND = 'rgb(250,250,250)';
const JOINT_FILL = 'rgb(235,205,55)';
const THRUSTER_FILL = 'rgb(240,140,40)';

export function roleFill(role: string, fixated: boolean): string {
  return (fixated ? FIXATED_FILL : ROLE_FILL)[role] ?? ROLE_FILL.none;
}

export function renderFrame(ctx: Draw2D, frame: Frame, widthPx: number, heightPx: number): void {
  const view = ARENA_SIZE + 2 * VIEW_MARGIN;
  const scale = Math.min(widthPx, heightPx) / view;
  const toX = (wx: number) => (wx + VIEW_MARGIN) * scale;
  const toY = (wy: number) => heightPx - (wy + VIEW_MARGIN) * scale;

  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, widthPx, heightPx);

  for (const body of frame.bodies) {
    ctx.fillStyle = roleFill(body.role, body.fixated);
    if (body.kind === 'circle') {
      ctx.beginPath();
      ctx.arc(toX(body.position[0]), toY(body.position[1]), (body.radius ?? 0.1) * scale, 0, 2 * Math.PI);
      ctx.fill();
    } else if (body.vertices && body.vertices.length >= 3) {
      const c = Math.cos(body.rotation);
      const s = Math.sin(body.rotation);
      ctx.beginPath();
      body.vertices.forEach(([lx, ly], i) => {
        const wx = body.position[0] + c * lx - s * ly;
        const wy = body.position[1] + s * lx + c * ly;
        if (i === 0) ctx.moveTo(toX(wx), toY(wy));
        else ctx.lineTo(toX(wx), toY(wy));
      });
      ctx.closePath();
      ctx.fill();
    }
  }

  for (const thruster of frame.thrusters) {
    const [wx, wy] = thruster.world_anchor;
    ctx.fillStyle = THRUSTER_FILL;
    ctx.beginPath();
    ctx.arc(toX(wx), toY(wy), 0.07 * scale, 0, 2 * Math.PI);
    ctx.fill();
    // a short tick showing the facing direction
    ctx.strokeStyle = THRUSTER_FILL;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(toX(wx), toY(wy));
    ctx.lineTo(toX(wx + 0.2 * Math.cos(thruster.world_angle)), toY(wy + 0.2 * Math.sin(thruster.world_angle)));
    ctx.stroke();
  }
  for (const joint of frame.joints) {
    const [wx, wy] = joint.world_anchor;
    ctx.fillStyle = JOINT_FILL;
    ctx.beginPath();
    ctx.arc(toX(wx), toY(wy), 0.07 * scale, 0, 2 * Math.PI);
    ctx.fill();
  }

  ctx.fillStyle = 'rgb(20,20,20)';
  ctx.font = '14px monospace';
  ctx.fillText(
    `tick ${frame.tick}  step ${frame.timestep}  mode ${frame.mode}  reward ${frame.reward.toFixed(3)}`,
    8, 18,
  );
  if (frame.done) {
    ctx.fillStyle = frame.reward > 0 ? 'rgb(40,150,50)' : 'rgb(180,40,35)';
    ctx.font = 'bold 24px sans-serif';
    ctx.fillText(frame.reward > 0 ? 'SOLVED - press R to reset' : 'EPISODE OVER - press R to reset',
                 widthPx / 4, heightPx / 2);
  }
}
