import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // the console is served by the engine itself (same origin); point the
    // simulated page at the e2e service so fetch is same-origin there too
    environmentOptions: {
      happyDOM: { url: "http://127.0.0.1:8894" },
    },
    testTimeout: 120000,
    hookTimeout: 60000,
  },
});
