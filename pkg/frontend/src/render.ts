// Scene drawing split in two: a pure layout step that turns the server view
// into draw commands (unit-testable), and a thin executor for a canvas 2D
// context. All geometry comes from the server's polygons.

import type { SceneView } from "./api.js";

export interface PolygonCommand {
  objectId: number;
  points: [number, number][];
  fill: string;
  outlined: boolean;
}

export interface SceneLayout {
  commands: PolygonCommand[];
  banner: string | null;
  scale: number;
  offset: [number, number];
}

const FILL_COLOURS: Record<string, string> = {
  green: "#3caa46",
  purple: "#8c3ca0",
};

export function layoutScene(
  view: SceneView,
  canvasWidth: number,
  canvasHeight: number,
  highlightedId: number | null,
): SceneLayout {
  const scale = Math.min(canvasWidth / view.board.width,
                         canvasHeight / view.board.height);
  const offset: [number, number] = [
    (canvasWidth - view.board.width * scale) / 2,
    (canvasHeight - view.board.height * scale) / 2,
  ];
  // objects arrive back-to-front from the server; preserving order keeps
  // the painter's occlusion correct
  const commands = view.objects.map((obj) => ({
    objectId: obj.id,
    points: obj.polygon.map(([x, y]) =>
      [offset[0] + x * scale, offset[1] + y * scale] as [number, number]),
    fill: FILL_COLOURS[obj.colour] ?? "#888888",
    outlined: obj.id === highlightedId,
  }));
  return {
    commands,
    banner: view.objects.length === 0 ? "session complete" : null,
    scale,
    offset,
  };
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  view: SceneView,
  highlightedId: number | null,
): SceneLayout {
  const layout = layoutScene(view, ctx.canvas.width, ctx.canvas.height,
                             highlightedId);
  ctx.fillStyle = "#16181d";
  ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const cmd of layout.commands) {
    ctx.beginPath();
    ctx.moveTo(cmd.points[0][0], cmd.points[0][1]);
    for (const [x, y] of cmd.points.slice(1)) {
      ctx.lineTo(x, y);
    }
    ctx.closePath();
    ctx.fillStyle = cmd.fill;
    ctx.fill();
    if (cmd.outlined) {
      ctx.lineWidth = 3;
      ctx.strokeStyle = "#ffd76a";
      ctx.stroke();
    }
  }
  if (layout.banner) {
    ctx.fillStyle = "#e8e8e8";
    ctx.font = "24px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(layout.banner, ctx.canvas.width / 2, ctx.canvas.height / 2);
  }
  return layout;
}
