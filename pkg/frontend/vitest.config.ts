import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // worker_threads pools deadlock in some sandboxed environments
    pool: "forks",
    testTimeout: 20000,
    hookTimeout: 60000,
  },
});
