import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'happy-dom',
    environmentOptions: {
      happyDOM: {
        // The e2e suite talks to the spawned service on another port.
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    globals: true,
    testTimeout: 30000,
    hookTimeout: 60000,
    // The e2e suite spawns one Python service per file; keep files serial.
    fileParallelism: false,
  },
});
