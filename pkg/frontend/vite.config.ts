import { defineConfig } from "vitest/config";

export default defineConfig({
  build: { outDir: "dist", sourcemap: true },
  test: { environment: "node", include: ["test/**/*.test.ts"] },
});
