import { initConsole } from "./app.js";

const root = document.getElementById("app");
if (root) {
  // served under /console by the engine itself, so same origin
  initConsole(root, "");
}
